#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace corpus_tutor {

// Name tables for the closed and open enumerations of the data model. Each
// enum used with these helpers specializes EnumNames with its spellings in
// declaration order.
template <class E>
struct EnumNames;

template <class E>
constexpr std::string_view to_string(E value) {
  return EnumNames<E>::names[static_cast<std::size_t>(value)];
}

template <class E>
constexpr std::optional<E> parse_enum(std::string_view text) {
  const auto& names = EnumNames<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  return std::nullopt;
}

// An enumeration that admits unlisted values as `other(tag)`. The enum must
// declare `other` as its last enumerator; EnumNames lists the named values
// only.
template <class E>
class OpenEnum {
 public:
  OpenEnum() = default;
  OpenEnum(E kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

  static OpenEnum other(std::string tag) {
    OpenEnum value;
    value.kind_ = E::other;
    value.tag_ = std::move(tag);
    return value;
  }

  static OpenEnum parse(std::string_view text) {
    if (auto kind = parse_enum<E>(text)) return OpenEnum(*kind);
    return other(std::string(text));
  }

  E kind() const { return kind_; }
  const std::string& tag() const { return tag_; }
  bool is_other() const { return kind_ == E::other; }

  std::string str() const {
    return is_other() ? tag_ : std::string(to_string(kind_));
  }

  friend bool operator==(const OpenEnum& a, const OpenEnum& b) {
    return a.kind_ == b.kind_ && a.tag_ == b.tag_;
  }
  friend bool operator==(const OpenEnum& a, E b) {
    return a.kind_ == b && b != E::other;
  }

 private:
  E kind_{};
  std::string tag_;
};

enum class Pos {
  verb,
  noun,
  proper_noun,
  adjective,
  adverb,
  preposition,
  conjunction,
  article,
  pronoun,
  particle,
  negative,
  numeral,
  interjection,
};

template <>
struct EnumNames<Pos> {
  static constexpr std::array<std::string_view, 13> names{
      "verb",        "noun",    "proper_noun", "adjective", "adverb",
      "preposition", "conjunction", "article", "pronoun",   "particle",
      "negative",    "numeral", "interjection"};
};

enum class StemKind { qal, niphal, piel, pual, hiphil, hophal, hithpael, other };

template <>
struct EnumNames<StemKind> {
  static constexpr std::array<std::string_view, 7> names{
      "qal", "niphal", "piel", "pual", "hiphil", "hophal", "hithpael"};
};
using Stem = OpenEnum<StemKind>;

enum class Tense {
  qatal,
  yiqtol,
  wayyiqtol,
  imperative,
  inf_construct,
  inf_absolute,
  participle,
};

template <>
struct EnumNames<Tense> {
  static constexpr std::array<std::string_view, 7> names{
      "qatal",         "yiqtol",       "wayyiqtol", "imperative",
      "inf_construct", "inf_absolute", "participle"};
};

enum class Gender { m, f, common };

template <>
struct EnumNames<Gender> {
  static constexpr std::array<std::string_view, 3> names{"m", "f", "common"};
};

enum class GrammaticalNumber { sg, pl, dual };

template <>
struct EnumNames<GrammaticalNumber> {
  static constexpr std::array<std::string_view, 3> names{"sg", "pl", "dual"};
};

enum class State { absolute, construct };

template <>
struct EnumNames<State> {
  static constexpr std::array<std::string_view, 2> names{"absolute",
                                                         "construct"};
};

enum class PhraseKind { NP, VP, PP, AdvP, AdjP, CjP, NegP, other };

template <>
struct EnumNames<PhraseKind> {
  static constexpr std::array<std::string_view, 7> names{
      "NP", "VP", "PP", "AdvP", "AdjP", "CjP", "NegP"};
};
using PhraseType = OpenEnum<PhraseKind>;

enum class FunctionKind {
  Subj,
  Pred,
  Objc,
  Cmpl,
  Time,
  Loca,
  Adju,
  Modi,
  Conj,
  other
};

template <>
struct EnumNames<FunctionKind> {
  static constexpr std::array<std::string_view, 9> names{
      "Subj", "Pred", "Objc", "Cmpl", "Time", "Loca", "Adju", "Modi", "Conj"};
};
using PhraseFunction = OpenEnum<FunctionKind>;

enum class LabelKind { Way0, WayX, WXQt, XQt, xQt0, NmCl, other };

template <>
struct EnumNames<LabelKind> {
  static constexpr std::array<std::string_view, 6> names{
      "Way0", "WayX", "WXQt", "XQt", "xQt0", "NmCl"};
};
using ClauseLabel = OpenEnum<LabelKind>;

}  // namespace corpus_tutor
