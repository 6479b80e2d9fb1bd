// distillkit/log.hpp

// Copyright 2026  DistillKit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILLKIT_LOG_HPP_
#define DISTILLKIT_LOG_HPP_

#include <string>

namespace distillkit {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

/// Current verbosity. Initialized once from the DISTILLKIT_LOG environment
/// variable ("quiet", "info", "debug"); defaults to info.
LogLevel log_level();
void set_log_level(LogLevel level);

/// Writes a line to stderr when the level is enabled. Progress only; nothing
/// the pipeline produces as an artifact goes through here.
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace distillkit

#endif  // DISTILLKIT_LOG_HPP_
