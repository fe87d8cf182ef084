// Copyright 2026 The nmzi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nmzi {

/// Spatial mode of the single particle. G is the bright output of the inner
/// interferometer, which terminates without a detector.
enum class PathLabel : std::uint8_t { S, A, B, C, D, E, F, G, DET1, DET2 };

inline constexpr std::size_t kPathCount = 10;

inline constexpr std::array<PathLabel, kPathCount> kAllPaths = {
    PathLabel::S, PathLabel::A, PathLabel::B,    PathLabel::C,    PathLabel::D,
    PathLabel::E, PathLabel::F, PathLabel::G, PathLabel::DET1, PathLabel::DET2};

inline constexpr std::string_view to_string(PathLabel p) {
  constexpr std::array<std::string_view, kPathCount> names = {
      "S", "A", "B", "C", "D", "E", "F", "G", "DET1", "DET2"};
  return names[static_cast<std::size_t>(p)];
}

inline PathLabel parse_path(std::string_view name) {
  for (PathLabel p : kAllPaths) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown path label '" + std::string(name) + "'");
}

inline constexpr bool is_terminal(PathLabel p) {
  return p == PathLabel::DET1 || p == PathLabel::DET2 || p == PathLabel::G;
}

inline constexpr bool is_detector(PathLabel p) {
  return p == PathLabel::DET1 || p == PathLabel::DET2;
}

}  // namespace nmzi
