// frontend/fft.h
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

#ifndef TSRNNT_FRONTEND_FFT_H_
#define TSRNNT_FRONTEND_FFT_H_

#include <complex>
#include <vector>

namespace tsrnnt {

// In-place iterative radix-2 FFT (forward, no scaling). The size must be a
// power of two.
void Fft(std::vector<std::complex<double>> *data);

// Smallest power of two >= n.
int RoundUpToPowerOfTwo(int n);

}  // namespace tsrnnt

#endif  // TSRNNT_FRONTEND_FFT_H_
