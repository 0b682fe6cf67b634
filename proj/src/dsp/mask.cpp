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

#include "m2b/dsp/mask.hpp"

#include <string>

#include "m2b/error.hpp"

namespace m2b::dsp {
namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(what) + ": shape mismatch (" +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
}

template <typename Op>
ComplexSpectrogram combine(const ComplexSpectrogram& a, const ComplexSpectrogram& b,
                           const char* what, Op op) {
  require_same_shape(a.values, b.values, what);
  ComplexSpectrogram out{ComplexMatrix(a.bins(), a.frames()), a.config};
  auto dst = out.values.values();
  auto x = a.values.values();
  auto y = b.values.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = op(x[i], y[i]);
  return out;
}

}  // namespace

ComplexSpectrogram apply_complex_mask(const ComplexSpectrogram& s,
                                      const ComplexMask& m) {
  require_same_shape(s.values, m.values, "apply_complex_mask");
  ComplexSpectrogram out{ComplexMatrix(s.bins(), s.frames()), s.config};
  auto dst = out.values.values();
  auto src = s.values.values();
  auto mask = m.values.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double sr = src[i].real(), si = src[i].imag();
    const double mr = mask[i].real(), mi = mask[i].imag();
    dst[i] = Complex(sr * mr - si * mi, sr * mi + si * mr);
  }
  return out;
}

Waveform mix_mono(const Waveform& l, const Waveform& r) {
  if (l.size() != r.size()) throw ShapeError("mix_mono: channel lengths differ");
  if (l.sample_rate != r.sample_rate)
    throw ShapeError("mix_mono: channel sample rates differ");
  Waveform out{std::vector<double>(l.size()), l.sample_rate};
  for (std::size_t i = 0; i < l.size(); ++i)
    out.samples[i] = (l.samples[i] + r.samples[i]) / 2.0;
  return out;
}

ComplexSpectrogram diff_spectrogram(const ComplexSpectrogram& l,
                                    const ComplexSpectrogram& r) {
  return combine(l, r, "diff_spectrogram",
                 [](Complex a, Complex b) { return (a - b) / 2.0; });
}

ComplexSpectrogram mono_spectrogram(const ComplexSpectrogram& l,
                                    const ComplexSpectrogram& r) {
  return combine(l, r, "mono_spectrogram",
                 [](Complex a, Complex b) { return (a + b) / 2.0; });
}

ComplexSpectrogram add(const ComplexSpectrogram& a, const ComplexSpectrogram& b) {
  return combine(a, b, "add", [](Complex x, Complex y) { return x + y; });
}

ComplexSpectrogram subtract(const ComplexSpectrogram& a,
                            const ComplexSpectrogram& b) {
  return combine(a, b, "subtract", [](Complex x, Complex y) { return x - y; });
}

}  // namespace m2b::dsp
