// Copyright 2026 The Setxpand Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SETXPAND_KERNELS_H_
#define SETXPAND_KERNELS_H_

#include <cstddef>
#include <span>

namespace setxpand {
namespace kernels {

// Dense vector primitives used by embedding training and similarity scans.
// Every entry has a scalar reference implementation; SIMD variants must agree
// with it up to floating-point reassociation.
struct KernelTable {
  const char *name;
  // Single-precision dot product with float accumulation (training loop).
  float (*dot)(const float *a, const float *b, std::size_t n);
  // Dot product of float vectors with double accumulation (queries).
  double (*dot_f64)(const float *a, const float *b, std::size_t n);
  // Dot product of a double vector with a float vector, double accumulation.
  double (*dot_mixed)(const double *a, const float *b, std::size_t n);
  // y += alpha * x
  void (*axpy)(float alpha, const float *x, float *y, std::size_t n);
};

const KernelTable &ScalarKernels();

// Returns nullptr when the AVX2 variant is not compiled in or the running CPU
// lacks AVX2/FMA.
const KernelTable *Avx2Kernels();

// The table selected at first use. SETXPAND_SIMD=scalar forces the scalar
// reference path.
const KernelTable &ActiveKernels();

inline float Dot(std::span<const float> a, std::span<const float> b) {
  return ActiveKernels().dot(a.data(), b.data(), a.size());
}

inline double DotF64(std::span<const float> a, std::span<const float> b) {
  return ActiveKernels().dot_f64(a.data(), b.data(), a.size());
}

inline double DotMixed(std::span<const double> a, std::span<const float> b) {
  return ActiveKernels().dot_mixed(a.data(), b.data(), a.size());
}

inline void Axpy(float alpha, std::span<const float> x, std::span<float> y) {
  ActiveKernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace kernels
}  // namespace setxpand

#endif  // SETXPAND_KERNELS_H_
