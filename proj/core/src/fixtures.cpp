#include "dagplan/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "dagplan/errors.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void validate_mockwiki(const TaskInstance& t) {
  std::set<std::string> titles;
  std::string corpus;
  for (const auto& a : t.payload.at("articles")) {
    const auto title = a.at("title").get<std::string>();
    if (!titles.insert(lower(title)).second) throw FixtureError(t.id + ": duplicate article '" + title + "'");
    corpus += lower(a.at("text").get<std::string>()) + "\n";
  }
  if (t.gold.contains("answer")) {
    const auto answer = t.gold.at("answer").get<std::string>();
    if (answer.empty()) throw FixtureError(t.id + ": gold answer is empty");
    if (corpus.find(lower(answer)) == std::string::npos) {
      throw FixtureError(t.id + ": gold answer '" + answer + "' does not occur in any article");
    }
  }
}

void validate_traveltoy(const TaskInstance& t) {
  const std::string world = t.payload.dump();
  for (const auto& c : t.gold.value("constraints", json::array())) {
    const auto category = c.at("category").get<std::string>();
    if (category != "commonsense" && category != "hard") {
      throw FixtureError(t.id + ": constraint category must be commonsense or hard");
    }
    for (const auto& needle : c.value("contains", std::vector<std::string>{})) {
      if (world.find(needle) == std::string::npos) {
        throw FixtureError(t.id + ": constraint '" + c.at("name").get<std::string>() + "' needs '" + needle +
                           "' which the databases never return");
      }
    }
  }
}

void validate_textlab(const TaskInstance& t) {
  std::set<std::string> rooms;
  for (const auto& r : t.payload.at("rooms")) rooms.insert(r.at("name").get<std::string>());
  for (const auto& r : t.payload.at("rooms")) {
    for (const auto& e : r.value("exits", std::vector<std::string>{})) {
      if (!rooms.count(e)) throw FixtureError(t.id + ": exit to unknown room '" + e + "'");
    }
  }
  if (!rooms.count(t.payload.at("start").get<std::string>())) throw FixtureError(t.id + ": unknown start room");
  std::set<std::string> objects;
  for (const auto& o : t.payload.value("objects", json::array())) objects.insert(o.at("name").get<std::string>());
  for (const auto& o : t.payload.value("objects", json::array())) {
    const auto loc = o.at("location").get<std::string>();
    if (!rooms.count(loc) && !objects.count(loc) && loc != "inventory") {
      throw FixtureError(t.id + ": object location '" + loc + "' is neither a room nor an object");
    }
  }
  for (const auto& g : t.payload.value("goals", json::array())) {
    const auto type = g.at("type").get<std::string>();
    if (type == "agent_in") {
      if (!rooms.count(g.at("room").get<std::string>())) throw FixtureError(t.id + ": goal names unknown room");
      continue;
    }
    static const std::set<std::string> known = {"holding", "open", "active", "inside", "measured", "focused"};
    if (!known.count(type)) throw FixtureError(t.id + ": unknown goal type '" + type + "'");
    if (!objects.count(g.at("object").get<std::string>())) throw FixtureError(t.id + ": goal names unknown object");
    if (type == "inside" && !objects.count(g.at("container").get<std::string>())) {
      throw FixtureError(t.id + ": goal names unknown container");
    }
  }
}

}  // namespace

void validate_task(const TaskInstance& task) {
  try {
    if (task.environment == "mockwiki") {
      validate_mockwiki(task);
    } else if (task.environment == "traveltoy") {
      validate_traveltoy(task);
    } else if (task.environment == "textlab") {
      validate_textlab(task);
    } else {
      throw FixtureError(task.id + ": unknown environment '" + task.environment + "'");
    }
  } catch (const json::exception& e) {
    throw FixtureError(task.id + ": malformed payload: " + e.what());
  }
}

TaskInstance task_from_json(const json& doc) {
  TaskInstance t;
  try {
    const int version = doc.value("version", kFixtureVersion);
    if (version != kFixtureVersion) throw FixtureError("unsupported fixture version " + std::to_string(version));
    t.id = doc.at("id").get<std::string>();
    t.environment = doc.at("environment").get<std::string>();
    t.query = doc.at("query").get<std::string>();
    t.gold = doc.value("gold", json::object());
    t.payload = doc.value("payload", json::object());
  } catch (const json::exception& e) {
    throw FixtureError(std::string("malformed fixture: ") + e.what());
  }
  validate_task(t);
  return t;
}

json task_to_json(const TaskInstance& task) {
  return {{"version", kFixtureVersion}, {"id", task.id},           {"environment", task.environment},
          {"query", task.query},        {"gold", task.gold},       {"payload", task.payload}};
}

TaskInstance load_task(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FixtureError("cannot open fixture " + file.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw FixtureError("fixture " + file.string() + " is not valid JSON");
  return task_from_json(doc);
}

std::vector<TaskInstance> load_task_set(const std::filesystem::path& path) {
  if (std::filesystem::is_regular_file(path)) return {load_task(path)};
  if (!std::filesystem::is_directory(path)) throw FixtureError("fixture set not found: " + path.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw FixtureError("fixture set " + path.string() + " contains no *.json files");
  std::vector<TaskInstance> tasks;
  for (const auto& f : files) tasks.push_back(load_task(f));
  return tasks;
}

}  // namespace dagplan
