// distillkit/wav.hpp

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

#ifndef DISTILLKIT_WAV_HPP_
#define DISTILLKIT_WAV_HPP_

#include <string>

#include "distillkit/types.hpp"

namespace distillkit {

/// Reads a mono RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float
/// samples. 16-bit samples are scaled to [-1, 1) by 1/32768. Unknown chunks
/// are skipped. Throws FormatError (with a byte offset) on malformed files
/// and DataError on unsupported layouts such as multi-channel audio.
Waveform read_wav(const std::string& path);

/// Writes mono 16-bit PCM, clipping samples to [-1, 1). The file is written
/// to a temporary name and renamed into place.
void write_wav(const std::string& path, const Waveform& wav);

}  // namespace distillkit

#endif  // DISTILLKIT_WAV_HPP_
