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


#ifndef DSNER_LABELS_H_
#define DSNER_LABELS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dsner {

// The closed five-label entity inventory.
enum class Label : uint8_t {
  kNanoparticle = 0,
  kProperty = 1,
  kMaterial = 2,
  kEvent = 3,
  kTechnique = 4,
};

inline constexpr int kNumLabels = 5;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::kNanoparticle, Label::kProperty, Label::kMaterial, Label::kEvent,
    Label::kTechnique};

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view name);

// Parses a label name or throws DataError with `context` in the message.
Label ParseLabelOrThrow(std::string_view name, std::string_view context);

// A single BIO tag: O, B-<label> or I-<label>.
class BioTag {
 public:
  enum class Kind : uint8_t { kOutside, kBegin, kInside };

  // Number of distinct tags (O plus B/I for every label).
  static constexpr int kCount = 1 + 2 * kNumLabels;

  constexpr BioTag() = default;
  static constexpr BioTag Outside() { return BioTag(); }
  static constexpr BioTag Begin(Label label) {
    return BioTag(Kind::kBegin, label);
  }
  static constexpr BioTag Inside(Label label) {
    return BioTag(Kind::kInside, label);
  }

  // Accepts exactly "O", "B-<Label>" or "I-<Label>".
  static std::optional<BioTag> Parse(std::string_view text);

  // Dense index in [0, kCount): O = 0, B-x = 1 + 2x, I-x = 2 + 2x.
  static BioTag FromIndex(int index);
  int index() const {
    return kind_ == Kind::kOutside ? 0
                                   : 1 + 2 * static_cast<int>(label_) +
                                         (kind_ == Kind::kInside ? 1 : 0);
  }

  Kind kind() const { return kind_; }
  bool is_outside() const { return kind_ == Kind::kOutside; }
  bool is_begin() const { return kind_ == Kind::kBegin; }
  bool is_inside() const { return kind_ == Kind::kInside; }
  // Only meaningful for B/I tags.
  Label label() const { return label_; }

  std::string ToString() const;

  // True if this tag may follow `previous` (nullopt = sentence start).
  bool CanFollow(std::optional<BioTag> previous) const;

  friend bool operator==(const BioTag &a, const BioTag &b) {
    return a.kind_ == b.kind_ &&
           (a.kind_ == Kind::kOutside || a.label_ == b.label_);
  }

 private:
  constexpr BioTag(Kind kind, Label label) : kind_(kind), label_(label) {}

  Kind kind_ = Kind::kOutside;
  Label label_ = Label::kNanoparticle;
};

// Tag indices ordered by decoding tie-break priority: O first, then tag
// strings in lexicographic order.
const std::array<int, BioTag::kCount> &TagPriorityOrder();

}  // namespace dsner

#endif  // DSNER_LABELS_H_
