#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "spanrel/error.hpp"

namespace spanrel {

/// The nine decision categories. Legal/insurance is deliberately absent.
enum class DecisionCategory {
  DefiningProblem,
  EvaluatingTestResult,
  DrugRelated,
  TherapeuticProcedureRelated,
  GatheringInformation,
  AdviceAndPrecaution,
  ContactRelated,
  TreatmentGoal,
  Deferment,
};

inline constexpr std::size_t kCategoryCount = 9;

inline constexpr std::array<DecisionCategory, kCategoryCount> kAllCategories{
    DecisionCategory::DefiningProblem,      DecisionCategory::EvaluatingTestResult,
    DecisionCategory::DrugRelated,          DecisionCategory::TherapeuticProcedureRelated,
    DecisionCategory::GatheringInformation, DecisionCategory::AdviceAndPrecaution,
    DecisionCategory::ContactRelated,       DecisionCategory::TreatmentGoal,
    DecisionCategory::Deferment,
};

namespace detail {
struct CategoryNames {
  std::string_view label;       // report surface form
  std::string_view identifier;  // enumerant spelling
};

inline constexpr std::array<CategoryNames, kCategoryCount> kCategoryNames{{
    {"Defining problem", "DefiningProblem"},
    {"Evaluating test result", "EvaluatingTestResult"},
    {"Drug-related", "DrugRelated"},
    {"Therapeutic procedure related", "TherapeuticProcedureRelated"},
    {"Gathering information", "GatheringInformation"},
    {"Advice and precaution", "AdviceAndPrecaution"},
    {"Contact-related", "ContactRelated"},
    {"Treatment goal", "TreatmentGoal"},
    {"Deferment", "Deferment"},
}};

inline bool iequals_ascii(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; };
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}
}  // namespace detail

inline std::size_t category_index(DecisionCategory c) { return static_cast<std::size_t>(c); }

/// Report label, e.g. "Drug-related".
inline std::string_view category_label(DecisionCategory c) {
  return detail::kCategoryNames[category_index(c)].label;
}

inline std::string_view category_identifier(DecisionCategory c) {
  return detail::kCategoryNames[category_index(c)].identifier;
}

/// Accepts the report label (any ASCII case) or the enumerant identifier.
inline std::optional<DecisionCategory> try_parse_category(std::string_view text) {
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    const auto& names = detail::kCategoryNames[i];
    if (detail::iequals_ascii(text, names.label) || text == names.identifier) {
      return kAllCategories[i];
    }
  }
  return std::nullopt;
}

inline DecisionCategory parse_category(std::string_view text) {
  if (auto c = try_parse_category(text)) return *c;
  throw ValidationError("unknown category \"" + std::string(text) + "\"");
}

}  // namespace spanrel
