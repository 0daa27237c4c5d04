#include "geomc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "geomc/errors.hpp"

namespace geomc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool skip_line(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

long long parse_integer(const std::string& token, std::size_t line_no) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(line_no, "expected an integer, got '" + token + "'");
  return value;
}

std::vector<std::size_t> parse_team(const std::string& text, std::size_t line_no) {
  std::istringstream tokens(text);
  std::vector<std::size_t> team;
  std::string token;
  while (tokens >> token) {
    const long long idx = parse_integer(token, line_no);
    if (idx < 1) fail(line_no, "player indices start at 1");
    team.push_back(static_cast<std::size_t>(idx - 1));
  }
  if (team.empty()) fail(line_no, "empty team");
  std::set<std::size_t> unique(team.begin(), team.end());
  if (unique.size() != team.size()) fail(line_no, "player listed twice in one team");
  return team;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::vector<MatchRecord> parse_matches(std::istream& in) {
  std::vector<MatchRecord> matches;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto bar = line.find('|');
    if (bar == std::string::npos || line.find('|', bar + 1) != std::string::npos) {
      fail(line_no, "expected exactly one '|' separating winners from losers");
    }
    MatchRecord m{parse_team(line.substr(0, bar), line_no), parse_team(line.substr(bar + 1), line_no)};
    for (auto w : m.winners) {
      if (std::find(m.losers.begin(), m.losers.end(), w) != m.losers.end()) {
        fail(line_no, "player " + std::to_string(w + 1) + " is on both teams");
      }
    }
    matches.push_back(std::move(m));
  }
  return matches;
}

std::vector<MatchRecord> load_matches(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_matches(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_matches(const std::vector<MatchRecord>& matches, const std::filesystem::path& path,
                  const std::string& header_comment) {
  auto out = open_output(path);
  if (!header_comment.empty()) {
    std::istringstream lines(header_comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  for (const auto& m : matches) {
    for (std::size_t k = 0; k < m.winners.size(); ++k) out << (k ? " " : "") << m.winners[k] + 1;
    out << " |";
    for (auto l : m.losers) out << ' ' << l + 1;
    out << '\n';
  }
}

std::size_t player_count(const std::vector<MatchRecord>& matches) {
  std::size_t count = 0;
  for (const auto& m : matches) {
    for (auto i : m.winners) count = std::max(count, i + 1);
    for (auto i : m.losers) count = std::max(count, i + 1);
  }
  return count;
}

std::vector<MatchRecord> make_synthetic_matches(const Vector& strengths, std::size_t count,
                                                Rng& rng) {
  const auto players = static_cast<std::size_t>(strengths.size());
  if (players < 2) throw DimensionError("make_synthetic_matches: need at least two players");
  std::vector<std::size_t> order(players);
  std::vector<MatchRecord> matches;
  matches.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng.engine());
    const std::size_t max_team = std::min<std::size_t>(3, players / 2);
    const std::size_t size_a = 1 + rng.index(max_team);
    const std::size_t size_b = 1 + rng.index(max_team);
    std::vector<std::size_t> a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size_a));
    std::vector<std::size_t> b(order.begin() + static_cast<std::ptrdiff_t>(size_a),
                               order.begin() + static_cast<std::ptrdiff_t>(size_a + size_b));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (auto i : a) sum_a += strengths[static_cast<Eigen::Index>(i)];
    for (auto i : b) sum_b += strengths[static_cast<Eigen::Index>(i)];
    if (rng.uniform() < sum_a / (sum_a + sum_b)) {
      matches.push_back({std::move(a), std::move(b)});
    } else {
      matches.push_back({std::move(b), std::move(a)});
    }
  }
  return matches;
}

EigenmodelData edges_to_data(const EdgeList& edges) {
  const auto m = static_cast<Eigen::Index>(edges.nodes);
  Matrix ystar = Matrix::Zero(m, m);
  for (const auto& e : edges.pairs) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    ystar(i, j) = ystar(j, i) = e.edge ? 1.0 : -1.0;
  }
  return EigenmodelData(std::move(ystar));
}

EdgeList data_to_edges(const EigenmodelData& data) {
  EdgeList out;
  out.nodes = static_cast<std::size_t>(data.nodes());
  for (Eigen::Index i = 0; i < data.nodes(); ++i) {
    for (Eigen::Index j = i + 1; j < data.nodes(); ++j) {
      const double y = data.ystar(i, j);
      if (y != 0.0) {
        out.pairs.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), y > 0.0});
      }
    }
  }
  return out;
}

EigenmodelData parse_edges(std::istream& in) {
  EdgeList edges;
  bool have_header = false;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    std::string token;
    while (tokens >> token) fields.push_back(token);
    if (!have_header) {
      if (fields.size() != 1) fail(line_no, "expected the node count on its own line");
      const long long m = parse_integer(fields[0], line_no);
      if (m < 2) fail(line_no, "node count must be at least 2");
      edges.nodes = static_cast<std::size_t>(m);
      have_header = true;
      continue;
    }
    if (fields.size() != 3) fail(line_no, "expected 'i j y'");
    const long long i = parse_integer(fields[0], line_no);
    const long long j = parse_integer(fields[1], line_no);
    const long long y = parse_integer(fields[2], line_no);
    const auto m = static_cast<long long>(edges.nodes);
    if (i < 1 || j < 1 || i > m || j > m) fail(line_no, "node index out of range");
    if (i == j) fail(line_no, "self-loop");
    if (y != 0 && y != 1) fail(line_no, "edge indicator must be 0 or 1");
    const auto a = static_cast<std::size_t>(std::min(i, j) - 1);
    const auto b = static_cast<std::size_t>(std::max(i, j) - 1);
    if (!seen.insert({a, b}).second) fail(line_no, "duplicate pair");
    edges.pairs.push_back({a, b, y == 1});
  }
  if (!have_header) throw ParseError("edge file has no node-count header");
  return edges_to_data(edges);
}

EigenmodelData load_edges(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_edges(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_edges(const EigenmodelData& data, const std::filesystem::path& path) {
  const EdgeList edges = data_to_edges(data);
  auto out = open_output(path);
  out << edges.nodes << '\n';
  for (const auto& e : edges.pairs) out << e.i + 1 << ' ' << e.j + 1 << ' ' << (e.edge ? 1 : 0) << '\n';
}

std::vector<std::string> coordinate_columns(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<std::string> eigenmodel_columns(std::size_t m, std::size_t p) {
  std::vector<std::string> names;
  // Column-stacked U: row index varies fastest.
  for (std::size_t r = 1; r <= p; ++r) {
    for (std::size_t i = 1; i <= m; ++i) {
      names.push_back("U" + std::to_string(i) + "_" + std::to_string(r));
    }
  }
  for (std::size_t r = 1; r <= p; ++r) names.push_back("L" + std::to_string(r) + std::to_string(r));
  names.emplace_back("c");
  return names;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: '" + text + "'");
  return value;
}

void write_trace(const ChainTrace& trace, const std::filesystem::path& path,
                 const std::vector<std::string>& columns) {
  if (trace.empty()) throw DomainError("write_trace: empty trace");
  if (static_cast<Eigen::Index>(columns.size()) != trace.samples.front().size()) {
    throw DimensionError("write_trace: column names do not match the sample dimension");
  }
  auto out = open_output(path);
  out << "step";
  for (const auto& c : columns) out << ',' << c;
  out << ",accepted,delta_H,log_density\n";
  for (std::size_t s = 0; s < trace.size(); ++s) {
    out << s;
    const Vector& x = trace.samples[s];
    for (Eigen::Index j = 0; j < x.size(); ++j) out << ',' << format_double(x[j]);
    out << ',' << (trace.accepted[s] ? 1 : 0) << ',' << format_double(trace.delta_h[s]) << ','
        << format_double(trace.log_density[s]) << '\n';
  }
  if (!out) throw Error("write_trace: failed writing '" + path.string() + "'");
}

void write_trace(const ChainTrace& trace, const std::filesystem::path& path) {
  if (trace.empty()) throw DomainError("write_trace: empty trace");
  write_trace(trace, path, coordinate_columns(static_cast<std::size_t>(trace.samples.front().size())));
}

TraceFile read_trace(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty trace file");
  const auto header = split_csv(line);
  if (header.size() < 5 || header.front() != "step" || header[header.size() - 3] != "accepted" ||
      header[header.size() - 2] != "delta_H" || header.back() != "log_density") {
    throw ParseError(path.string() + ": unexpected trace header");
  }
  TraceFile file;
  file.columns.assign(header.begin() + 1, header.end() - 3);
  const auto dim = static_cast<Eigen::Index>(file.columns.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) fail(line_no, "wrong number of fields");
    Vector x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) x[j] = parse_double(fields[static_cast<std::size_t>(j) + 1]);
    file.trace.samples.push_back(std::move(x));
    file.trace.accepted.push_back(fields[fields.size() - 3] == "1");
    file.trace.delta_h.push_back(parse_double(fields[fields.size() - 2]));
    file.trace.log_density.push_back(parse_double(fields.back()));
  }
  return file;
}

}  // namespace geomc
