#include <cstdlib>
#include <string>

#include "iotsql/kernels/kernels.hpp"

namespace iotsql::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  std::string_view name;
};

bool forced_scalar() {
  const char* v = std::getenv("IOTSQL_FORCE_SCALAR");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

const Table& table() {
  static const Table t = [] {
#if defined(IOTSQL_HAVE_AVX2_TU)
    if (avx2_supported() && !forced_scalar()) return Table{avx2::dot, avx2::axpy, avx2::scale, "avx2"};
#endif
    return Table{scalar::dot, scalar::axpy, scalar::scale, "scalar"};
  }();
  return t;
}

}  // namespace

bool avx2_supported() {
#if defined(IOTSQL_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
void scale(double alpha, double* y, std::size_t n) { table().scale(alpha, y, n); }
std::string_view active_backend() { return table().name; }

}  // namespace iotsql::kernels
