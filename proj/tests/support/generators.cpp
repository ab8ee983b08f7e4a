#include "generators.hpp"

namespace dagplan::testing {

using nlohmann::json;

namespace {

const std::vector<std::string> kWords = {"open",  "drawer", "search", "Denver", "flight", "beaker", "the",
                                         "river", "capital", "measure", "note",  "\"quoted\"", "a:b",
                                         "50%",   "café",   "x\\y",   "tab\there", "Step", "##"};

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(std::mt19937_64& rng) { return uniform(rng, 0, 1) == 1; }

// Words that are safe inside plan text: no line may look like a header or a field label.
std::string plan_words(std::mt19937_64& rng, int lo, int hi) {
  static const std::vector<std::string> safe = {"open", "drawer", "search", "Denver", "flight", "beaker",
                                                "river", "capital", "measure", "note", "\"quoted\"", "50%"};
  std::string out;
  const int n = uniform(rng, lo, hi);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += safe[uniform(rng, 0, static_cast<int>(safe.size()) - 1)];
  }
  return out;
}

std::string node_name(int k) { return "node_" + std::to_string(k); }

}  // namespace

std::string random_words(std::mt19937_64& rng, int min_words, int max_words) {
  std::string out;
  const int n = uniform(rng, min_words, max_words);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kWords[uniform(rng, 0, static_cast<int>(kWords.size()) - 1)];
  }
  return out;
}

Plan random_plan(std::mt19937_64& rng) {
  Plan p;
  const int n = uniform(rng, 1, 6);
  for (int i = 1; i <= n; ++i) {
    std::string step = plan_words(rng, 1, 8);
    if (uniform(rng, 0, 3) == 0) step += "\n  then " + plan_words(rng, 1, 4);
    p.steps.push_back({i, coin(rng) ? plan_words(rng, 1, 10) : std::string{}, step});
  }
  return p;
}

Evaluation random_evaluation(std::mt19937_64& rng) {
  Evaluation e;
  e.status = static_cast<EvalStatus>(uniform(rng, 0, 2));
  e.need_replan = coin(rng);
  if (e.status == EvalStatus::NeedsMoreSteps && !e.need_replan) {
    e.reason = random_words(rng, 1, 12);
  } else if (coin(rng)) {
    e.reason = random_words(rng, 1, 12);
  }
  return e;
}

ReplanDecision random_replan(std::mt19937_64& rng) {
  ReplanDecision d;
  d.replan = coin(rng);
  if (coin(rng)) d.thought = random_words(rng, 1, 10);
  if (d.replan) d.new_plan = random_plan(rng);
  return d;
}

RevisionDelta random_revision(std::mt19937_64& rng) {
  RevisionDelta d;
  d.thought = random_words(rng, 0, 10);
  d.need_update = coin(rng);
  for (int i = uniform(rng, 0, 2); i > 0; --i) {
    d.description_updates.push_back({NodeId(node_name(uniform(rng, 1, 9))), random_words(rng, 1, 8)});
  }
  for (int i = uniform(rng, 0, 2); i > 0; --i) {
    NewNodeSpec spec;
    if (coin(rng)) spec.id = NodeId("extra_" + std::to_string(uniform(rng, 1, 99)));
    spec.description = random_words(rng, 1, 8);
    for (int j = uniform(rng, 0, 2); j > 0; --j) spec.dependencies.emplace_back(node_name(uniform(rng, 1, 9)));
    for (int j = uniform(rng, 0, 2); j > 0; --j) spec.dependents.emplace_back(node_name(uniform(rng, 1, 9)));
    d.new_nodes.push_back(std::move(spec));
  }
  for (int i = uniform(rng, 0, 2); i > 0; --i) d.remove_nodes.emplace_back(node_name(uniform(rng, 1, 9)));
  return d;
}

std::vector<SubgoalSpec> random_subgoals(std::mt19937_64& rng) {
  std::vector<SubgoalSpec> out;
  const int n = uniform(rng, 1, 7);
  for (int i = 1; i <= n; ++i) {
    SubgoalSpec s{NodeId(node_name(i)), random_words(rng, 1, 10), {}};
    for (int j = 1; j < i; ++j) {
      if (uniform(rng, 0, 2) == 0) s.dependencies.emplace_back(node_name(j));
    }
    out.push_back(std::move(s));
  }
  return out;
}

json random_object(std::mt19937_64& rng, int depth) {
  json obj = json::object();
  for (int i = uniform(rng, 1, 4); i > 0; --i) {
    const std::string key = "k" + std::to_string(uniform(rng, 0, 20));
    switch (uniform(rng, 0, depth < 2 ? 5 : 3)) {
      case 0:
        obj[key] = uniform(rng, -1000, 1000);
        break;
      case 1:
        obj[key] = random_words(rng, 0, 5) + (coin(rng) ? " {brace} }" : "");
        break;
      case 2:
        obj[key] = coin(rng);
        break;
      case 3:
        obj[key] = nullptr;
        break;
      case 4:
        obj[key] = random_object(rng, depth + 1);
        break;
      default:
        obj[key] = json::array({random_object(rng, depth + 1), uniform(rng, 0, 9)});
        break;
    }
  }
  return obj;
}

std::string wrap_in_prose(std::mt19937_64& rng, const std::string& document) {
  static const std::vector<std::string> prefixes = {"", "Sure! ", "Here is my answer:\n", "Thought: checking.\n\n",
                                                    "Result -> "};
  static const std::vector<std::string> suffixes = {"", " hope that helps", "\n\nLet me know.", "\n(end)",
                                                    " Done."};
  std::string body = document;
  switch (uniform(rng, 0, 2)) {
    case 0:
      body = "```json\n" + body + "\n```";
      break;
    case 1:
      body = "```\n" + body + "\n```";
      break;
    default:
      break;
  }
  return prefixes[uniform(rng, 0, static_cast<int>(prefixes.size()) - 1)] + body +
         suffixes[uniform(rng, 0, static_cast<int>(suffixes.size()) - 1)];
}

std::vector<std::string> evaluation_mutations(const Evaluation& e) {
  const json base = json::parse(render_evaluation(e));
  std::vector<std::string> out;
  json m = base;
  m["status"] = "done";
  out.push_back(m.dump());
  m = base;
  m.erase("status");
  out.push_back(m.dump());
  m = base;
  m.erase("need_replan");
  out.push_back(m.dump());
  m = base;
  m["need_replan"] = "no";
  out.push_back(m.dump());
  m = base;
  m["status"] = "needs_more_steps";
  m["need_replan"] = false;
  m["reason"] = nullptr;
  out.push_back(m.dump());
  out.push_back(base.dump().substr(0, base.dump().size() - 1));
  return out;
}

std::vector<std::string> replan_mutations(const ReplanDecision& d) {
  const json base = json::parse(render_replan(d));
  std::vector<std::string> out;
  json m = base;
  m.erase("RePlan");
  out.push_back(m.dump());
  m = base;
  m["RePlan"] = "yes";
  out.push_back(m.dump());
  m = base;
  if (d.replan) {
    m["NewPlan"] = nullptr;
    out.push_back(m.dump());
    m = base;
    m["NewPlan"] = "no headers here";
    out.push_back(m.dump());
  } else {
    m["NewPlan"] = "## Step 1\nReasoning: r\nStep: s";
    out.push_back(m.dump());
  }
  return out;
}

std::vector<std::string> revision_mutations(const RevisionDelta& d) {
  const json base = json::parse(render_revision(d));
  std::vector<std::string> out;
  for (const char* key : {"thought", "need_update", "description_updates", "new_nodes", "remove_nodes"}) {
    json m = base;
    m.erase(key);
    out.push_back(m.dump());
  }
  json m = base;
  m["need_update"] = 1;
  out.push_back(m.dump());
  m = base;
  m["remove_nodes"] = json::array({""});
  out.push_back(m.dump());
  m = base;
  m["new_nodes"] = json::array({{{"description", ""}, {"dependencies", json::array()}, {"dependents", json::array()}}});
  out.push_back(m.dump());
  return out;
}

std::vector<std::string> subgoal_mutations(const std::vector<SubgoalSpec>& s) {
  const json base = json::parse(render_subgoals(s));
  std::vector<std::string> out;
  json m = base;
  m["subgoals"] = json::array();
  out.push_back(m.dump());
  m = base;
  m["subgoals"].push_back(base["subgoals"][0]);
  out.push_back(m.dump());
  m = base;
  m["subgoals"][0]["dependencies"].push_back("node_missing");
  out.push_back(m.dump());
  m = base;
  m["subgoals"][0]["description"] = "";
  out.push_back(m.dump());
  m = base;
  m["subgoals"][0].erase("id");
  out.push_back(m.dump());
  return out;
}

std::vector<std::string> plan_mutations(const Plan& p) {
  std::vector<std::string> out;
  Plan skipped = p;
  skipped.steps.back().index += 1;
  out.push_back(render_plan(skipped));
  Plan zero = p;
  for (auto& s : zero.steps) s.index -= 1;
  out.push_back(render_plan(zero));
  std::string no_step = render_plan(p);
  no_step.replace(no_step.rfind("Step: "), 6, "Do: ");
  out.push_back(no_step);
  out.push_back("Reasoning: nothing\nStep: no header");
  return out;
}

}  // namespace dagplan::testing
