#include "dramanet/common.hpp"

#include <algorithm>
#include <cctype>

namespace dramanet {

std::string_view to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::kPositive:
      return "positive";
    case SentimentLabel::kNeutral:
      return "neutral";
    case SentimentLabel::kNegative:
      return "negative";
  }
  return "neutral";
}

std::optional<SentimentLabel> parse_label(std::string_view text) {
  for (auto label : kAllLabels) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

SentimentLabel label_or_throw(std::string_view text) {
  if (auto label = parse_label(text)) return *label;
  throw FormatError("unknown sentiment label '" + std::string(text) + "'");
}

std::string_view to_string(Role role) { return role == Role::kFocus ? "focus" : "other"; }

std::optional<Role> parse_role(std::string_view text) {
  if (text == "focus") return Role::kFocus;
  if (text == "other") return Role::kOther;
  return std::nullopt;
}

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

std::string to_upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace dramanet
