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

#include "m2b/dsp/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace m2b::dsp {
namespace {

enum class PlanKind { R2C, C2R, Forward, Backward };

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* ptr;
};

// The FFTW planner is not re-entrant; executing a plan on fresh arrays is.
fftw_plan plan_for(PlanKind kind, std::size_t n) {
  static std::mutex mutex;
  static std::map<std::pair<PlanKind, std::size_t>, PlanHandle> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(kind, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second.get();

  const int len = static_cast<int>(n);
  FftwBuffer<double> real(n);
  FftwBuffer<fftw_complex> cplx(n);
  fftw_plan p = nullptr;
  switch (kind) {
    case PlanKind::R2C:
      p = fftw_plan_dft_r2c_1d(len, real.ptr, cplx.ptr, FFTW_ESTIMATE);
      break;
    case PlanKind::C2R:
      p = fftw_plan_dft_c2r_1d(len, cplx.ptr, real.ptr, FFTW_ESTIMATE);
      break;
    case PlanKind::Forward:
    case PlanKind::Backward: {
      FftwBuffer<fftw_complex> out(n);
      p = fftw_plan_dft_1d(len, cplx.ptr, out.ptr,
                           kind == PlanKind::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
      break;
    }
  }
  if (!p) throw std::runtime_error("FFTW planning failed");
  return cache.emplace(key, PlanHandle(p)).first->second.get();
}

std::vector<std::complex<double>> complex_transform(
    std::span<const std::complex<double>> x, PlanKind kind) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  FftwBuffer<fftw_complex> in(n);
  FftwBuffer<fftw_complex> out(n);
  std::memcpy(in.ptr, x.data(), sizeof(fftw_complex) * n);
  fftw_execute_dft(plan_for(kind, n), in.ptr, out.ptr);
  std::vector<std::complex<double>> result(n);
  std::memcpy(result.data(), out.ptr, sizeof(fftw_complex) * n);
  return result;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> input) {
  const std::size_t n = input.size();
  if (n == 0) return {};
  FftwBuffer<double> in(n);
  FftwBuffer<fftw_complex> out(n / 2 + 1);
  std::memcpy(in.ptr, input.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(plan_for(PlanKind::R2C, n), in.ptr, out.ptr);
  std::vector<std::complex<double>> result(n / 2 + 1);
  std::memcpy(result.data(), out.ptr, sizeof(fftw_complex) * result.size());
  return result;
}

std::vector<double> irfft(std::span<const std::complex<double>> bins,
                          std::size_t n) {
  if (n == 0) return {};
  if (bins.size() != n / 2 + 1)
    throw std::invalid_argument("irfft: expected n/2 + 1 bins");
  FftwBuffer<fftw_complex> in(bins.size());
  FftwBuffer<double> out(n);
  std::memcpy(in.ptr, bins.data(), sizeof(fftw_complex) * bins.size());
  fftw_execute_dft_c2r(plan_for(PlanKind::C2R, n), in.ptr, out.ptr);
  std::vector<double> result(out.ptr, out.ptr + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : result) v *= scale;
  return result;
}

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x) {
  return complex_transform(x, PlanKind::Forward);
}

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x) {
  auto result = complex_transform(x, PlanKind::Backward);
  const double scale = result.empty() ? 1.0 : 1.0 / static_cast<double>(result.size());
  for (auto& v : result) v *= scale;
  return result;
}

}  // namespace m2b::dsp
