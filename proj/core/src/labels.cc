// Copyright 2026 The dsner Authors.
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


#include "dsner/labels.h"

#include <algorithm>

#include "dsner/error.h"

namespace dsner {

namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "Nanoparticle", "Property", "Material", "Event", "Technique"};

}  // namespace

std::string_view LabelName(Label label) {
  return kLabelNames[static_cast<int>(label)];
}

std::optional<Label> ParseLabel(std::string_view name) {
  for (int i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

Label ParseLabelOrThrow(std::string_view name, std::string_view context) {
  auto label = ParseLabel(name);
  if (!label) {
    throw DataError(std::string(context) + ": unknown label '" +
                    std::string(name) + "'");
  }
  return *label;
}

std::optional<BioTag> BioTag::Parse(std::string_view text) {
  if (text == "O") return Outside();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  auto label = ParseLabel(text.substr(2));
  if (!label) return std::nullopt;
  if (text[0] == 'B') return Begin(*label);
  if (text[0] == 'I') return Inside(*label);
  return std::nullopt;
}

BioTag BioTag::FromIndex(int index) {
  if (index == 0) return Outside();
  Label label = static_cast<Label>((index - 1) / 2);
  return (index - 1) % 2 == 0 ? Begin(label) : Inside(label);
}

std::string BioTag::ToString() const {
  switch (kind_) {
    case Kind::kOutside:
      return "O";
    case Kind::kBegin:
      return "B-" + std::string(LabelName(label_));
    case Kind::kInside:
      return "I-" + std::string(LabelName(label_));
  }
  return "O";
}

bool BioTag::CanFollow(std::optional<BioTag> previous) const {
  if (!is_inside()) return true;
  return previous && !previous->is_outside() && previous->label() == label_;
}

const std::array<int, BioTag::kCount> &TagPriorityOrder() {
  static const std::array<int, BioTag::kCount> order = [] {
    std::array<int, BioTag::kCount> result;
    for (int i = 0; i < BioTag::kCount; ++i) result[i] = i;
    std::sort(result.begin() + 1, result.end(), [](int a, int b) {
      return BioTag::FromIndex(a).ToString() < BioTag::FromIndex(b).ToString();
    });
    return result;
  }();
  return order;
}

}  // namespace dsner
