#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dagplan/environment.hpp"

namespace dagplan {

/// Interactive encyclopedia lookup over a fixed article store.
/// Actions: Search[keyword], Lookup[keyword], Finish[answer].
class MockWiki final : public Environment {
 public:
  std::string_view kind() const noexcept override { return "mockwiki"; }
  std::vector<std::string> admissible_commands() const override;
  EnvMetrics metrics() const override;

  /// Sentences of an article in document order.
  static std::vector<std::string> split_sentences(const std::string& text);

 protected:
  std::string do_reset(const TaskInstance& task) override;
  StepResult do_step(std::string_view action) override;

 private:
  struct Article {
    std::string title;
    std::string text;
  };

  std::string search(const std::string& keyword);
  std::string lookup(const std::string& keyword);

  std::vector<Article> articles_;
  std::optional<std::size_t> active_page_;
  std::string lookup_keyword_;
  std::vector<std::string> lookup_results_;
  std::size_t lookup_cursor_ = 0;
  std::optional<std::string> answer_;
};

/// Tool-calling travel planner over in-memory tables with a notebook.
class TravelToy final : public Environment {
 public:
  struct NotebookEntry {
    std::string description;
    std::string data;  // last search result at the time of writing
  };

  std::string_view kind() const noexcept override { return "traveltoy"; }
  std::vector<std::string> admissible_commands() const override;
  EnvMetrics metrics() const override;

  const std::vector<NotebookEntry>& notebook() const noexcept { return notebook_; }

 protected:
  std::string do_reset(const TaskInstance& task) override;
  StepResult do_step(std::string_view action) override;

 private:
  std::string flight_search(const std::vector<std::string>& args) const;
  std::string distance_matrix(const std::vector<std::string>& args) const;
  std::string city_table(const char* table, const char* noun, const std::string& city) const;
  std::string city_search(const std::string& state) const;
  std::string make_plan(const std::string& query) const;

  nlohmann::json payload_;
  std::vector<NotebookEntry> notebook_;
  std::string last_result_;
  std::optional<std::string> plan_;
};

/// Small room-and-object lab world with dense, latched goal rewards.
class TextLab final : public Environment {
 public:
  struct Object {
    std::string location;  // room name, container object name, or "inventory"
    bool portable = false;
    bool openable = false;
    bool container = false;
    bool activatable = false;
    bool open = false;
    bool active = false;
    bool measured = false;
    bool focused = false;
    std::map<std::string, std::string> properties;

    friend bool operator==(const Object&, const Object&) = default;
  };

  struct World {
    std::string agent_room;
    std::map<std::string, std::vector<std::string>> exits;
    std::map<std::string, Object> objects;

    friend bool operator==(const World&, const World&) = default;
  };

  std::string_view kind() const noexcept override { return "textlab"; }
  std::vector<std::string> admissible_commands() const override;
  EnvMetrics metrics() const override;

  const World& world() const noexcept { return world_; }
  std::size_t goal_count() const noexcept { return goals_.size(); }
  std::size_t satisfied_count() const noexcept { return satisfied_.size(); }

  /// Whether a goal condition (fixture JSON form) holds in `world`.
  static bool condition_holds(const nlohmann::json& condition, const World& world);
  static bool is_visible(const World& world, const std::string& object);

 protected:
  std::string do_reset(const TaskInstance& task) override;
  StepResult do_step(std::string_view action) override;

 private:
  std::string apply(std::string_view action, bool& changed);
  std::string describe_room() const;
  double cumulative_reward() const;

  World world_;
  std::vector<nlohmann::json> goals_;
  std::set<std::size_t> satisfied_;
};

}  // namespace dagplan
