// distillkit/cli.hpp

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

#ifndef DISTILLKIT_CLI_HPP_
#define DISTILLKIT_CLI_HPP_

namespace distillkit {

/// Entry point for the `distillkit` tool; also callable in-process by tests.
/// Subcommands: synth, features, import-embeddings, distill, finetune,
/// evaluate, bench. Returns the process exit code: 0 on success, 1 on usage
/// errors, 2 on data or format errors. All randomness in a run derives from
/// the subcommand's --seed; outputs are byte-deterministic for a fixed seed
/// and worker count does not affect results. The DISTILLKIT_LOG environment
/// variable (quiet|info|debug) controls stderr verbosity.
int run_cli(int argc, const char* const* argv);

}  // namespace distillkit

#endif  // DISTILLKIT_CLI_HPP_
