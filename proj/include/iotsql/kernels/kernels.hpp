#pragma once

#include <cstddef>
#include <string_view>

namespace iotsql::kernels {

// Dense double-precision kernels used by the linear models. The dispatching
// entry points pick AVX2+FMA when the CPU has it, unless the environment
// variable IOTSQL_FORCE_SCALAR is set to a non-empty value other than "0".
double dot(const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// y *= alpha
void scale(double alpha, double* y, std::size_t n);

// "avx2" or "scalar".
std::string_view active_backend();
bool avx2_supported();

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_supported().
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
}  // namespace avx2

}  // namespace iotsql::kernels
