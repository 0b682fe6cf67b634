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

#include <span>
#include <vector>

namespace m2b::dsp {

// Band-limited (Hann-windowed sinc) sample-rate conversion. Output length is
// round(in.size() * to_rate / from_rate).
std::vector<double> resample(std::span<const double> in, int from_rate,
                             int to_rate);

}  // namespace m2b::dsp
