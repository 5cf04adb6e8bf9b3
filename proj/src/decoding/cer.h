// decoding/cer.h
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

#ifndef TSRNNT_DECODING_CER_H_
#define TSRNNT_DECODING_CER_H_

#include <cstdint>
#include <span>

namespace tsrnnt {

// Levenshtein distance with unit substitution / insertion / deletion costs.
int32_t EditDistance(std::span<const int32_t> a, std::span<const int32_t> b);

// Token error rate: EditDistance(ref, hyp) / |ref|. Throws on an empty
// reference.
double Cer(std::span<const int32_t> reference, std::span<const int32_t> hypothesis);

}  // namespace tsrnnt

#endif  // TSRNNT_DECODING_CER_H_
