#include "dagplan/roles.hpp"

namespace dagplan {

std::string format_reminder(int attempt, const std::string& error) {
  std::string flat = error.substr(0, 240);
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return "\n\nFORMAT REMINDER (attempt " + std::to_string(attempt) +
         "): your previous reply could not be parsed (" + flat +
         "). Reply again using exactly the required output format.";
}

}  // namespace dagplan
