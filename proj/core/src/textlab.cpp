#include <algorithm>
#include <cctype>

#include "dagplan/errors.hpp"
#include "dagplan/mocks.hpp"
#include "dagplan/parsers.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (s.rfind(prefix, 0) != 0) return false;
  s = trim(s.substr(prefix.size()));
  return true;
}

std::optional<std::string> find_name(const std::map<std::string, TextLab::Object>& objects, const std::string& wanted) {
  for (const auto& [name, _] : objects) {
    if (lower(name) == wanted) return name;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> TextLab::admissible_commands() const {
  return {"look around: describe the current room",
          "go to <room>: move to an adjacent room",
          "open <object>: open a container",
          "take <object>: pick up a portable object",
          "put <object> in <container>: place a held object into an open container",
          "activate <object>: switch on a device",
          "measure <object>: read the measurable properties of an object",
          "focus on <object>: declare the object the task is about"};
}

double TextLab::cumulative_reward() const {
  if (goals_.empty()) return 1.0;
  return static_cast<double>(satisfied_.size()) / static_cast<double>(goals_.size());
}

EnvMetrics TextLab::metrics() const { return {done(), cumulative_reward(), std::nullopt, std::nullopt}; }

bool TextLab::is_visible(const World& world, const std::string& object) {
  auto it = world.objects.find(object);
  for (int depth = 0; it != world.objects.end() && depth < 16; ++depth) {
    const std::string& loc = it->second.location;
    if (loc == "inventory" || loc == world.agent_room) return true;
    auto holder = world.objects.find(loc);
    if (holder == world.objects.end()) return false;
    if (holder->second.openable && !holder->second.open) return false;
    it = holder;
  }
  return false;
}

bool TextLab::condition_holds(const json& c, const World& world) {
  const std::string type = c.at("type").get<std::string>();
  if (type == "agent_in") return world.agent_room == c.at("room").get<std::string>();
  const auto& obj = world.objects.at(c.at("object").get<std::string>());
  if (type == "holding") return obj.location == "inventory";
  if (type == "open") return obj.open;
  if (type == "active") return obj.active;
  if (type == "inside") return obj.location == c.at("container").get<std::string>();
  if (type == "measured") return obj.measured;
  if (type == "focused") return obj.focused;
  throw FixtureError("unknown goal condition type '" + type + "'");
}

std::string TextLab::describe_room() const {
  std::string out = "You are in the " + world_.agent_room + ".";
  std::vector<std::string> here;
  for (const auto& [name, obj] : world_.objects) {
    if (obj.location != "inventory" && is_visible(world_, name)) {
      std::string item = name;
      if (obj.openable) item += obj.open ? " (open)" : " (closed)";
      if (obj.activatable) item += obj.active ? " (on)" : " (off)";
      here.push_back(item);
    }
  }
  if (!here.empty()) {
    out += " You see:";
    for (std::size_t i = 0; i < here.size(); ++i) out += (i ? ", " : " ") + here[i];
    out += ".";
  }
  const auto& exits = world_.exits.at(world_.agent_room);
  if (!exits.empty()) {
    out += " Exits:";
    for (std::size_t i = 0; i < exits.size(); ++i) out += (i ? ", " : " ") + exits[i];
    out += ".";
  }
  return out;
}

std::string TextLab::do_reset(const TaskInstance& task) {
  world_ = World{};
  goals_.clear();
  satisfied_.clear();
  const json& p = task.payload;
  for (const auto& room : p.at("rooms")) {
    world_.exits[room.at("name").get<std::string>()] = room.value("exits", std::vector<std::string>{});
  }
  world_.agent_room = p.at("start").get<std::string>();
  for (const auto& o : p.value("objects", json::array())) {
    Object obj;
    obj.location = o.at("location").get<std::string>();
    obj.portable = o.value("portable", false);
    obj.openable = o.value("openable", false);
    obj.container = o.value("container", obj.openable);
    obj.activatable = o.value("activatable", false);
    obj.open = o.value("open", false);
    obj.active = o.value("active", false);
    obj.properties = o.value("properties", std::map<std::string, std::string>{});
    world_.objects[o.at("name").get<std::string>()] = std::move(obj);
  }
  for (const auto& g : p.value("goals", json::array())) goals_.push_back(g);
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    if (condition_holds(goals_[i], world_)) satisfied_.insert(i);
  }
  if (satisfied_.size() == goals_.size()) mark_done();
  return "Task: " + task.query + "\n" + describe_room();
}

std::string TextLab::apply(std::string_view action, bool& changed) {
  static const std::string nothing = "Nothing happens.";
  changed = false;
  std::string cmd = lower(trim(action));

  auto visible_object = [&](const std::string& wanted) -> std::optional<std::string> {
    auto name = find_name(world_.objects, wanted);
    if (name && is_visible(world_, *name)) return name;
    return std::nullopt;
  };

  if (cmd == "look around" || cmd == "look") return describe_room();

  if (strip_prefix(cmd, "go to ") || strip_prefix(cmd, "go ")) {
    const auto& exits = world_.exits.at(world_.agent_room);
    for (const auto& room : exits) {
      if (lower(room) == cmd) {
        world_.agent_room = room;
        changed = true;
        return "You move to the " + room + ". " + describe_room();
      }
    }
    return nothing;
  }
  if (strip_prefix(cmd, "open ")) {
    auto name = visible_object(cmd);
    if (!name) return nothing;
    auto& obj = world_.objects.at(*name);
    if (!obj.openable || obj.open) return nothing;
    obj.open = true;
    changed = true;
    std::string out = "The " + *name + " is now open.";
    for (const auto& [inner, o] : world_.objects) {
      if (o.location == *name) out += " Inside: " + inner + ".";
    }
    return out;
  }
  if (strip_prefix(cmd, "take ") || strip_prefix(cmd, "pick up ")) {
    auto name = visible_object(cmd);
    if (!name) return nothing;
    auto& obj = world_.objects.at(*name);
    if (!obj.portable || obj.location == "inventory") return nothing;
    obj.location = "inventory";
    changed = true;
    return "You take the " + *name + ".";
  }
  if (strip_prefix(cmd, "put ")) {
    auto sep = cmd.find(" into ");
    std::size_t skip = 6;
    if (sep == std::string::npos) {
      sep = cmd.find(" in ");
      skip = 4;
    }
    if (sep == std::string::npos) return nothing;
    auto item = visible_object(trim(cmd.substr(0, sep)));
    auto holder = visible_object(trim(cmd.substr(sep + skip)));
    if (!item || !holder || *item == *holder) return nothing;
    auto& obj = world_.objects.at(*item);
    const auto& target = world_.objects.at(*holder);
    if (!obj.portable || !target.container || (target.openable && !target.open)) return nothing;
    obj.location = *holder;
    changed = true;
    return "You put the " + *item + " in the " + *holder + ".";
  }
  if (strip_prefix(cmd, "activate ") || strip_prefix(cmd, "turn on ")) {
    auto name = visible_object(cmd);
    if (!name) return nothing;
    auto& obj = world_.objects.at(*name);
    if (!obj.activatable || obj.active) return nothing;
    obj.active = true;
    changed = true;
    return "The " + *name + " is now on.";
  }
  if (strip_prefix(cmd, "measure ")) {
    auto name = visible_object(cmd);
    if (!name) return nothing;
    auto& obj = world_.objects.at(*name);
    if (obj.properties.empty()) return nothing;
    changed = !obj.measured;
    obj.measured = true;
    std::string out = "Measurement of " + *name + ":";
    for (const auto& [k, v] : obj.properties) out += " " + k + " = " + v + ";";
    return out;
  }
  if (strip_prefix(cmd, "focus on ")) {
    auto name = visible_object(cmd);
    if (!name) return nothing;
    auto& obj = world_.objects.at(*name);
    if (obj.focused) return nothing;
    obj.focused = true;
    changed = true;
    return "You focus on the " + *name + ".";
  }
  return nothing;
}

StepResult TextLab::do_step(std::string_view action) {
  bool changed = false;
  std::string observation = apply(action, changed);
  const std::size_t before = satisfied_.size();
  if (changed) {
    for (std::size_t i = 0; i < goals_.size(); ++i) {
      if (!satisfied_.count(i) && condition_holds(goals_[i], world_)) satisfied_.insert(i);
    }
  }
  const double delta = goals_.empty() ? 0.0
                                      : static_cast<double>(satisfied_.size() - before) / static_cast<double>(goals_.size());
  const bool finished = satisfied_.size() == goals_.size();
  if (finished) {
    observation += " All goals are satisfied.";
    mark_done();
  }
  return {std::move(observation), delta, finished};
}

}  // namespace dagplan
