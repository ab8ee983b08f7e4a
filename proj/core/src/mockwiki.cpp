#include <algorithm>
#include <cctype>

#include "dagplan/errors.hpp"
#include "dagplan/mocks.hpp"
#include "dagplan/parsers.hpp"

namespace dagplan {

namespace {

std::string casefold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string first_paragraph(const std::string& text) {
  const auto pos = text.find("\n\n");
  return trim(pos == std::string::npos ? text : text.substr(0, pos));
}

}  // namespace

std::vector<std::string> MockWiki::split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool paragraph_break = c == '\n' && i + 1 < text.size() && text[i + 1] == '\n';
    if (paragraph_break) {
      if (auto s = trim(current); !s.empty()) out.push_back(std::move(s));
      current.clear();
      continue;
    }
    current += (c == '\n') ? ' ' : c;
    const bool terminal = (c == '.' || c == '!' || c == '?') &&
                          (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])));
    if (terminal) {
      if (auto s = trim(current); !s.empty()) out.push_back(std::move(s));
      current.clear();
    }
  }
  if (auto s = trim(current); !s.empty()) out.push_back(std::move(s));
  return out;
}

std::vector<std::string> MockWiki::admissible_commands() const {
  return {"Search[Keyword]: search the encyclopedia; returns the first paragraph of an exactly matching page, "
          "otherwise a list of similar entities",
          "Lookup[Keyword]: return the next sentence containing the keyword in the most recently searched page",
          "Finish[Answer]: finish the task with the given final answer"};
}

EnvMetrics MockWiki::metrics() const { return {done(), std::nullopt, answer_, std::nullopt}; }

std::string MockWiki::do_reset(const TaskInstance& task) {
  articles_.clear();
  active_page_.reset();
  lookup_keyword_.clear();
  lookup_results_.clear();
  lookup_cursor_ = 0;
  answer_.reset();
  for (const auto& a : task.payload.at("articles")) {
    articles_.push_back({a.at("title").get<std::string>(), a.at("text").get<std::string>()});
  }
  return "Question: " + task.query;
}

std::string MockWiki::search(const std::string& keyword) {
  const std::string needle = casefold(trim(keyword));
  lookup_keyword_.clear();
  lookup_results_.clear();
  lookup_cursor_ = 0;
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    if (casefold(articles_[i].title) == needle) {
      active_page_ = i;
      return first_paragraph(articles_[i].text);
    }
  }

  active_page_.reset();
  std::vector<const Article*> similar;
  for (const auto& a : articles_) {
    if (!needle.empty() && casefold(a.title).find(needle) != std::string::npos) similar.push_back(&a);
  }
  std::stable_sort(similar.begin(), similar.end(), [](const Article* x, const Article* y) {
    if (x->title.size() != y->title.size()) return x->title.size() < y->title.size();
    return x->title < y->title;
  });
  if (similar.size() > 5) similar.resize(5);
  if (similar.empty()) return "Could not find [" + trim(keyword) + "]. No similar entities found.";
  std::string list;
  for (const auto* a : similar) {
    if (!list.empty()) list += ", ";
    list += "'" + a->title + "'";
  }
  return "Could not find [" + trim(keyword) + "]. Similar: [" + list + "].";
}

std::string MockWiki::lookup(const std::string& keyword) {
  if (!active_page_) return "No page is active. Use Search[Keyword] first.";
  const std::string needle = casefold(trim(keyword));
  if (needle != lookup_keyword_ || lookup_results_.empty()) {
    lookup_keyword_ = needle;
    lookup_results_.clear();
    lookup_cursor_ = 0;
    for (auto& s : split_sentences(articles_[*active_page_].text)) {
      if (casefold(s).find(needle) != std::string::npos) lookup_results_.push_back(std::move(s));
    }
  }
  if (lookup_results_.empty()) return "No results for keyword [" + trim(keyword) + "].";
  if (lookup_cursor_ >= lookup_results_.size()) {
    lookup_cursor_ = 0;
    return "No more results.";
  }
  const std::size_t i = lookup_cursor_++;
  return "(Result " + std::to_string(i + 1) + " / " + std::to_string(lookup_results_.size()) + ") " +
         lookup_results_[i];
}

StepResult MockWiki::do_step(std::string_view action) {
  const auto call = parse_action_call(action);
  if (call && call->name == "Search") return {search(call->argument), std::nullopt, false};
  if (call && call->name == "Lookup") return {lookup(call->argument), std::nullopt, false};
  if (call && call->name == "Finish") {
    answer_ = call->argument;
    mark_done();
    return {"Episode finished. Answer: " + call->argument, std::nullopt, true};
  }
  return {"Invalid action: " + trim(action) + ". Valid actions are Search[<keyword>], Lookup[<keyword>], Finish[<answer>].",
          std::nullopt, false};
}

}  // namespace dagplan
