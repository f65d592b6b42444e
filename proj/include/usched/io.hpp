#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "usched/dks.hpp"
#include "usched/error.hpp"
#include "usched/instance.hpp"
#include "usched/job_set.hpp"
#include "usched/schedule.hpp"

namespace usched {

/// Contents of an instance file. Arcs are 0-based and may be any
/// generating relation; the closure is taken when the graph is built.
struct InstanceText {
  std::size_t jobs = 0;
  std::size_t machines = 1;
  std::vector<Arc> arcs;
  std::vector<std::string> comments;

  Instance to_instance() const { return make_instance(jobs, arcs, machines); }
};

namespace detail {

inline std::vector<std::string> split_words(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;)
    out.push_back(w);
  return out;
}

inline std::size_t parse_count(const std::string &word, std::size_t line,
                               const char *what) {
  if (word.empty() || !std::all_of(word.begin(), word.end(),
                                   [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError(line, std::string("expected a non-negative integer for ") +
                               what + ", got '" + word + "'");
  try {
    return static_cast<std::size_t>(std::stoull(word));
  } catch (const std::out_of_range &) {
    throw ParseError(line, std::string(what) + " is out of range");
  }
}

/// Text after the leading "c", without the separating blank.
inline std::string comment_body(const std::string &line) {
  auto pos = line.find('c');
  std::string rest = line.substr(pos + 1);
  auto start = rest.find_first_not_of(" \t");
  if (start == std::string::npos)
    return {};
  auto end = rest.find_last_not_of(" \t\r");
  return rest.substr(start, end - start + 1);
}

inline std::size_t one_based(const std::string &word, std::size_t line,
                             std::size_t limit, const char *what) {
  const std::size_t id = parse_count(word, line, what);
  if (id == 0 || id > limit)
    throw ParseError(line, std::string(what) + " " + word +
                               " is outside 1.." + std::to_string(limit));
  return id - 1;
}

} // namespace detail

/// Reads `p usched <n> <m>`, then `a <u> <v>` lines (1-based, u before v).
/// Lines starting with `c` are comments; blank lines are ignored.
inline InstanceText read_instance(std::istream &in) {
  InstanceText out;
  bool header = false;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    auto words = detail::split_words(raw);
    if (words.empty())
      continue;
    if (words[0] == "c") {
      out.comments.push_back(detail::comment_body(raw));
      continue;
    }
    if (words[0] == "p") {
      if (header)
        throw ParseError(line, "second problem line");
      if (words.size() != 4 || words[1] != "usched")
        throw ParseError(line, "expected 'p usched <n> <m>'");
      out.jobs = detail::parse_count(words[2], line, "job count");
      out.machines = detail::parse_count(words[3], line, "machine count");
      if (out.machines == 0)
        throw ParseError(line, "machine count must be at least 1");
      header = true;
      continue;
    }
    if (words[0] == "a") {
      if (!header)
        throw ParseError(line, "arc before the problem line");
      if (words.size() != 3)
        throw ParseError(line, "expected 'a <u> <v>'");
      const std::size_t u = detail::one_based(words[1], line, out.jobs, "job");
      const std::size_t v = detail::one_based(words[2], line, out.jobs, "job");
      if (u == v)
        throw ParseError(line, "self-loop on job " + words[1]);
      out.arcs.emplace_back(u, v);
      continue;
    }
    throw ParseError(line, "unknown line type '" + words[0] + "'");
  }
  if (!header)
    throw ParseError(0, "missing 'p usched' line");
  return out;
}

inline InstanceText parse_instance(const std::string &text) {
  std::istringstream in(text);
  return read_instance(in);
}

/// Canonical form: comments, the problem line, then distinct arcs sorted.
inline void write_instance(std::ostream &out, const InstanceText &t) {
  for (const auto &c : t.comments)
    out << (c.empty() ? "c" : "c " + c) << '\n';
  out << "p usched " << t.jobs << ' ' << t.machines << '\n';
  std::vector<Arc> arcs = t.arcs;
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  for (auto [u, v] : arcs)
    out << "a " << u + 1 << ' ' << v + 1 << '\n';
}

inline std::string format_instance(const InstanceText &t) {
  std::ostringstream out;
  write_instance(out, t);
  return out.str();
}

/// One slot per line, 1-based job IDs separated by blanks; a blank line or
/// the end of input ends the schedule.
inline Schedule read_schedule(std::istream &in, std::size_t machines) {
  Schedule s;
  s.machines = machines;
  JobSet seen;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    auto words = detail::split_words(raw);
    if (words.empty())
      break;
    JobSet slot;
    for (const auto &w : words) {
      const std::size_t v = detail::one_based(w, line, kMaxJobs, "job");
      if (seen.contains(v))
        throw ParseError(line, "job " + w + " appears twice");
      seen.insert(v);
      slot.insert(v);
    }
    s.slots.push_back(slot);
  }
  return s;
}

inline Schedule parse_schedule(const std::string &text, std::size_t machines) {
  std::istringstream in(text);
  return read_schedule(in, machines);
}

inline void write_schedule(std::ostream &out, const Schedule &s) {
  for (const auto &slot : s.slots) {
    bool first = true;
    for (JobId v : slot) {
      out << (first ? "" : " ") << v + 1;
      first = false;
    }
    out << '\n';
  }
}

inline std::string format_schedule(const Schedule &s) {
  std::ostringstream out;
  write_schedule(out, s);
  return out.str();
}

/// Reads `p dks <N> <M> <kappa> <ell>` followed by M lines `e <u> <v>`.
inline DksInstance read_dks(std::istream &in) {
  DksInstance d;
  bool header = false;
  std::size_t declared_edges = 0;
  std::string raw;
  std::size_t line = 1;
  for (; std::getline(in, raw); ++line) {
    auto words = detail::split_words(raw);
    if (words.empty() || words[0] == "c")
      continue;
    if (words[0] == "p") {
      if (header)
        throw ParseError(line, "second problem line");
      if (words.size() != 6 || words[1] != "dks")
        throw ParseError(line, "expected 'p dks <N> <M> <kappa> <ell>'");
      d.vertices = detail::parse_count(words[2], line, "vertex count");
      declared_edges = detail::parse_count(words[3], line, "edge count");
      d.kappa = detail::parse_count(words[4], line, "kappa");
      d.ell = detail::parse_count(words[5], line, "ell");
      header = true;
      continue;
    }
    if (words[0] == "e") {
      if (!header)
        throw ParseError(line, "edge before the problem line");
      if (words.size() != 3)
        throw ParseError(line, "expected 'e <u> <v>'");
      d.edges.emplace_back(detail::one_based(words[1], line, d.vertices, "vertex"),
                           detail::one_based(words[2], line, d.vertices, "vertex"));
      continue;
    }
    throw ParseError(line, "unknown line type '" + words[0] + "'");
  }
  if (!header)
    throw ParseError(0, "missing 'p dks' line");
  if (d.edges.size() != declared_edges)
    throw ParseError(line, "problem line declares " +
                               std::to_string(declared_edges) + " edges, found " +
                               std::to_string(d.edges.size()));
  return d;
}

inline DksInstance parse_dks(const std::string &text) {
  std::istringstream in(text);
  return read_dks(in);
}

inline void write_dks(std::ostream &out, const DksInstance &d) {
  out << "p dks " << d.vertices << ' ' << d.edges.size() << ' ' << d.kappa << ' '
      << d.ell << '\n';
  for (auto [u, v] : d.edges)
    out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

} // namespace usched
