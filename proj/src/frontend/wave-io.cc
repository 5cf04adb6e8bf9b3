// frontend/wave-io.cc
//
// Copyright 2026  The TS-RNNT Authors
//
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

#include "frontend/wave-io.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "base/error.h"

namespace tsrnnt {

namespace {

uint32_t ReadU32(std::istream &is) {
  std::array<unsigned char, 4> b{};
  is.read(reinterpret_cast<char *>(b.data()), 4);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "WAV: unexpected end of file";
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t ReadU16(std::istream &is) {
  std::array<unsigned char, 2> b{};
  is.read(reinterpret_cast<char *>(b.data()), 2);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "WAV: unexpected end of file";
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

std::string ReadTag(std::istream &is) {
  char tag[4];
  is.read(tag, 4);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "WAV: unexpected end of file";
  return std::string(tag, 4);
}

void WriteU32(std::ostream &os, uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void WriteU16(std::ostream &os, uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

}  // namespace

Waveform ReadWave(std::istream &is) {
  if (ReadTag(is) != "RIFF") TSRNNT_ERR_CODE(ErrorCode::kData) << "not a RIFF file";
  ReadU32(is);
  if (ReadTag(is) != "WAVE") TSRNNT_ERR_CODE(ErrorCode::kData) << "not a WAVE file";

  bool have_fmt = false;
  while (true) {
    std::string tag = ReadTag(is);
    uint32_t size = ReadU32(is);
    if (tag == "fmt ") {
      if (size < 16) TSRNNT_ERR_CODE(ErrorCode::kData) << "WAV: short fmt chunk";
      uint16_t format = ReadU16(is);
      uint16_t channels = ReadU16(is);
      uint32_t rate = ReadU32(is);
      ReadU32(is);  // byte rate
      ReadU16(is);  // block align
      uint16_t bits = ReadU16(is);
      is.ignore(size - 16 + (size & 1));
      if (format != 1 || bits != 16) {
        TSRNNT_ERR_CODE(ErrorCode::kData)
            << "WAV: only PCM16 is supported (format " << format << ", "
            << bits << " bits)";
      }
      if (channels != 1) {
        TSRNNT_ERR_CODE(ErrorCode::kData)
            << "WAV: expected mono, got " << channels << " channels";
      }
      if (rate != static_cast<uint32_t>(kSampleRate)) {
        TSRNNT_ERR_CODE(ErrorCode::kData)
            << "WAV: expected " << kSampleRate << " Hz, got " << rate;
      }
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) TSRNNT_ERR_CODE(ErrorCode::kData) << "WAV: data before fmt";
      std::vector<int16_t> pcm(size / 2);
      is.read(reinterpret_cast<char *>(pcm.data()), pcm.size() * 2);
      if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "WAV: truncated data chunk";
      Waveform wave;
      wave.samples.resize(pcm.size());
      for (size_t i = 0; i < pcm.size(); ++i) {
        uint16_t u = static_cast<uint16_t>(pcm[i]);
        // little-endian on disk; byte swap on big-endian hosts is not handled
        wave.samples[i] = static_cast<int16_t>(u) / 32768.0f;
      }
      return wave;
    } else {
      is.ignore(size + (size & 1));
    }
  }
}

Waveform ReadWave(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot open " << path;
  try {
    return ReadWave(is);
  } catch (const Error &e) {
    TSRNNT_ERR_CODE(e.code()) << path << ": " << e.what();
  }
}

void WriteWave(const Waveform &wave, std::ostream &os) {
  if (wave.sample_rate_hz != kSampleRate) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "WriteWave: sample rate must be " << kSampleRate;
  }
  uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  os.write("RIFF", 4);
  WriteU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  WriteU32(os, 16);
  WriteU16(os, 1);
  WriteU16(os, 1);
  WriteU32(os, kSampleRate);
  WriteU32(os, kSampleRate * 2);
  WriteU16(os, 2);
  WriteU16(os, 16);
  os.write("data", 4);
  WriteU32(os, data_bytes);
  for (float x : wave.samples) {
    float v = std::round(x * 32768.0f);
    v = std::clamp(v, -32768.0f, 32767.0f);
    WriteU16(os, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
}

void WriteWave(const Waveform &wave, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot write " << path;
  WriteWave(wave, os);
  if (!os) TSRNNT_ERR_CODE(ErrorCode::kData) << "error writing " << path;
}

}  // namespace tsrnnt
