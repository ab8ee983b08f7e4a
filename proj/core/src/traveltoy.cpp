#include "dagplan/errors.hpp"
#include "dagplan/mocks.hpp"
#include "dagplan/parsers.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

const std::map<std::string, std::string>& usage_hints() {
  static const std::map<std::string, std::string> hints = {
      {"FlightSearch", "FlightSearch[Departure City, Destination City, Date]"},
      {"GoogleDistanceMatrix", "GoogleDistanceMatrix[Origin, Destination, Mode] (mode: self-driving or taxi)"},
      {"AccommodationSearch", "AccommodationSearch[City]"},
      {"RestaurantSearch", "RestaurantSearch[City]"},
      {"AttractionSearch", "AttractionSearch[City]"},
      {"CitySearch", "CitySearch[State]"},
      {"NotebookWrite", "NotebookWrite[Short Description]"},
      {"MakePlan", "MakePlan[Query]"},
  };
  return hints;
}

std::size_t arity(const std::string& tool) {
  if (tool == "FlightSearch" || tool == "GoogleDistanceMatrix") return 3;
  return 1;
}

std::string render_value(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string render_row(const json& row) {
  std::string out;
  for (const auto& [k, v] : row.items()) {
    if (!out.empty()) out += "; ";
    out += k + ": " + render_value(v);
  }
  return out;
}

}  // namespace

std::vector<std::string> TravelToy::admissible_commands() const {
  return {"FlightSearch[Departure City, Destination City, Date]: flights between two cities on a date (YYYY-MM-DD)",
          "GoogleDistanceMatrix[Origin, Destination, Mode]: distance, time and cost by self-driving or taxi",
          "AccommodationSearch[City]: accommodations in a city",
          "RestaurantSearch[City]: restaurants in a city",
          "AttractionSearch[City]: attractions in a city",
          "CitySearch[State]: cities in a state",
          "NotebookWrite[Short Description]: store the latest search result in the notebook under a description",
          "MakePlan[Query]: produce the final travel plan from the notebook"};
}

EnvMetrics TravelToy::metrics() const { return {done(), std::nullopt, std::nullopt, plan_}; }

std::string TravelToy::do_reset(const TaskInstance& task) {
  payload_ = task.payload;
  notebook_.clear();
  last_result_.clear();
  plan_.reset();
  return "Query: " + task.query;
}

std::string TravelToy::flight_search(const std::vector<std::string>& args) const {
  std::string out;
  for (const auto& f : payload_.value("flights", json::array())) {
    if (f.value("origin", "") == args[0] && f.value("destination", "") == args[1] && f.value("date", "") == args[2]) {
      out += (out.empty() ? "" : "\n") + std::string("- ") + render_row(f);
    }
  }
  if (out.empty()) return "There is no flight from " + args[0] + " to " + args[1] + " on " + args[2] + ".";
  return "Flights from " + args[0] + " to " + args[1] + " on " + args[2] + ":\n" + out;
}

std::string TravelToy::distance_matrix(const std::vector<std::string>& args) const {
  if (args[2] != "self-driving" && args[2] != "taxi") {
    return "Invalid mode '" + args[2] + "'. Usage: " + usage_hints().at("GoogleDistanceMatrix");
  }
  for (const auto& d : payload_.value("distances", json::array())) {
    if (d.value("origin", "") == args[0] && d.value("destination", "") == args[1] && d.value("mode", "") == args[2]) {
      return args[2] + " from " + args[0] + " to " + args[1] + ": " + render_row(d);
    }
  }
  return "No " + args[2] + " route from " + args[0] + " to " + args[1] + ".";
}

std::string TravelToy::city_table(const char* table, const char* noun, const std::string& city) const {
  const json& t = payload_.value(table, json::object());
  if (!t.contains(city) || t.at(city).empty()) return std::string("No ") + noun + " found in " + city + ".";
  std::string out = std::string("Found ") + noun + " in " + city + ":";
  for (const auto& row : t.at(city)) out += "\n- " + render_row(row);
  return out;
}

std::string TravelToy::city_search(const std::string& state) const {
  const json& t = payload_.value("cities", json::object());
  if (!t.contains(state) || t.at(state).empty()) return "No cities found for state " + state + ".";
  std::string out;
  for (const auto& c : t.at(state)) out += (out.empty() ? "" : ", ") + c.get<std::string>();
  return "Cities in " + state + ": " + out;
}

std::string TravelToy::make_plan(const std::string& query) const {
  std::string out = "Travel plan for: " + query + "\nNotebook:";
  if (notebook_.empty()) out += "\n(empty)";
  for (std::size_t i = 0; i < notebook_.size(); ++i) {
    out += "\n" + std::to_string(i + 1) + ". " + notebook_[i].description;
    if (!notebook_[i].data.empty()) out += "\n" + notebook_[i].data;
  }
  return out;
}

StepResult TravelToy::do_step(std::string_view action) {
  const auto call = parse_action_call(action);
  if (!call || usage_hints().count(call->name) == 0) {
    std::string usage;
    for (const auto& [_, hint] : usage_hints()) usage += "\n" + hint;
    return {"Invalid tool call: " + trim(action) + ". Available tools:" + usage, std::nullopt, false};
  }
  const auto& tool = call->name;
  const bool single = arity(tool) == 1;
  if ((single && call->argument.empty()) || (!single && call->args.size() != arity(tool)) ||
      (!single && std::any_of(call->args.begin(), call->args.end(), [](const auto& a) { return a.empty(); }))) {
    return {"Malformed call. Usage: " + usage_hints().at(tool), std::nullopt, false};
  }

  if (tool == "NotebookWrite") {
    notebook_.push_back({call->argument, last_result_});
    return {"The information has been recorded in Notebook, and its index is " + std::to_string(notebook_.size() - 1) + ".",
            std::nullopt, false};
  }
  if (tool == "MakePlan") {
    plan_ = make_plan(call->argument);
    mark_done();
    return {*plan_, std::nullopt, true};
  }

  std::string result;
  if (tool == "FlightSearch") {
    result = flight_search(call->args);
  } else if (tool == "GoogleDistanceMatrix") {
    result = distance_matrix(call->args);
  } else if (tool == "AccommodationSearch") {
    result = city_table("accommodations", "accommodations", call->argument);
  } else if (tool == "RestaurantSearch") {
    result = city_table("restaurants", "restaurants", call->argument);
  } else if (tool == "AttractionSearch") {
    result = city_table("attractions", "attractions", call->argument);
  } else {
    result = city_search(call->argument);
  }
  last_result_ = result;
  return {result, std::nullopt, false};
}

}  // namespace dagplan
