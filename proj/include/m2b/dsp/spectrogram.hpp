// Copyright 2026 The m2b Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "m2b/dsp/audio_config.hpp"

namespace m2b::dsp {

using Complex = std::complex<double>;

// Dense row-major complex grid, rows = frequency bins, cols = time frames.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<Complex> values() noexcept { return data_; }
  std::span<const Complex> values() const noexcept { return data_; }

  bool same_shape(const ComplexMatrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

struct ComplexSpectrogram {
  ComplexMatrix values;
  AudioConfig config;

  std::size_t bins() const noexcept { return values.rows(); }
  std::size_t frames() const noexcept { return values.cols(); }
};

// Elementwise multiplier for a spectrogram of the same shape. Unbounded.
struct ComplexMask {
  ComplexMatrix values;

  static ComplexMask constant(std::size_t bins, std::size_t frames, Complex v) {
    return ComplexMask{ComplexMatrix(bins, frames, v)};
  }
};

// Drops bin 0 so the bin count becomes window_size / 2.
ComplexSpectrogram crop_lowest_bin(const ComplexSpectrogram& s);
// Inverse of crop_lowest_bin with a zero row in bin 0.
ComplexSpectrogram restore_lowest_bin(const ComplexSpectrogram& s);
ComplexMask restore_lowest_bin(const ComplexMask& m, Complex fill = {});

}  // namespace m2b::dsp
