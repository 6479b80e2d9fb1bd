// distillkit/wav.cpp

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

#include "distillkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "distillkit/error.hpp"
#include "distillkit/io_util.hpp"

namespace distillkit {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatIeeeFloat = 3;

}  // namespace

Waveform read_wav(const std::string& path) {
  BinaryReader reader(path);
  if (reader.read_string(4, "RIFF tag") != "RIFF")
    throw FormatError("not a RIFF file", 0);
  reader.read_u32("RIFF size");
  if (reader.read_string(4, "WAVE tag") != "WAVE")
    throw FormatError("RIFF file is not WAVE audio", 8);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;

  while (reader.remaining() >= 8) {
    const std::string chunk_id = reader.read_string(4, "chunk id");
    const uint32_t chunk_size = reader.read_u32("chunk size");
    const std::size_t chunk_start = reader.offset();
    if (chunk_id == "fmt ") {
      if (chunk_size < 16) throw FormatError("fmt chunk is too small", chunk_start);
      format = reader.read_u16("audio format");
      channels = reader.read_u16("channel count");
      sample_rate = reader.read_u32("sample rate");
      reader.read_u32("byte rate");
      reader.read_u16("block align");
      bits = reader.read_u16("bits per sample");
      have_fmt = true;
      reader.skip(chunk_size - 16, "fmt chunk extension");
    } else if (chunk_id == "data") {
      if (!have_fmt) throw FormatError("data chunk precedes fmt chunk", chunk_start);
      if (channels != 1)
        throw DataError(path + ": only mono audio is supported, file has " +
                        std::to_string(channels) + " channels");
      if (format == kFormatPcm && bits == 16) {
        const std::size_t n = chunk_size / 2;
        Waveform wav;
        wav.sample_rate = static_cast<int>(sample_rate);
        wav.samples.resize(n);
        // Same scale as write_wav, so a PCM round-trip stays within half a
        // quantization step.
        for (std::size_t i = 0; i < n; ++i) {
          const auto v = static_cast<int16_t>(reader.read_u16("sample data"));
          wav.samples[i] = static_cast<float>(v) / 32767.0f;
        }
        return wav;
      }
      if (format == kFormatIeeeFloat && bits == 32) {
        const std::size_t n = chunk_size / 4;
        Waveform wav;
        wav.sample_rate = static_cast<int>(sample_rate);
        wav.samples.resize(n);
        reader.read_f32_array(n, wav.samples.data(), "sample data");
        return wav;
      }
      throw DataError(path + ": unsupported sample encoding (format " + std::to_string(format) +
                      ", " + std::to_string(bits) + " bits)");
    } else {
      // Chunks are word-aligned; odd sizes carry a pad byte.
      reader.skip(chunk_size + (chunk_size & 1), "chunk body");
    }
  }
  throw FormatError("no data chunk found", reader.offset());
}

void write_wav(const std::string& path, const Waveform& wav) {
  const auto n = static_cast<uint32_t>(wav.samples.size());
  const uint32_t data_bytes = n * 2;
  AtomicFileWriter writer(path);
  writer.write_bytes("RIFF", 4);
  writer.write_u32(36 + data_bytes);
  writer.write_bytes("WAVE", 4);
  writer.write_bytes("fmt ", 4);
  writer.write_u32(16);
  writer.write_u16(kFormatPcm);
  writer.write_u16(1);
  writer.write_u32(static_cast<uint32_t>(wav.sample_rate));
  writer.write_u32(static_cast<uint32_t>(wav.sample_rate) * 2);
  writer.write_u16(2);
  writer.write_u16(16);
  writer.write_bytes("data", 4);
  writer.write_u32(data_bytes);
  for (const float s : wav.samples) {
    const float clipped = std::clamp(s, -1.0f, 1.0f);
    const auto v = static_cast<int16_t>(std::lrint(clipped * 32767.0f));
    writer.write_u16(static_cast<uint16_t>(v));
  }
  writer.commit();
}

}  // namespace distillkit
