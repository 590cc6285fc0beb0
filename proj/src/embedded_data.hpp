#pragma once

namespace iotsql::embedded {

extern const char* const kDefaultSchema;
extern const char* const kTemplateBank;

}  // namespace iotsql::embedded
