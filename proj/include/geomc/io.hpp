#ifndef GEOMC_IO_HPP
#define GEOMC_IO_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geomc/eigenmodel.hpp"
#include "geomc/rng.hpp"
#include "geomc/sampler.hpp"
#include "geomc/targets.hpp"

namespace geomc {

// Match files: one match per line, "w1 w2 ... | l1 l2 ...", 1-based player
// indices, '#' starts a comment line.

std::vector<MatchRecord> parse_matches(std::istream& in);
std::vector<MatchRecord> load_matches(const std::filesystem::path& path);
void save_matches(const std::vector<MatchRecord>& matches, const std::filesystem::path& path,
                  const std::string& header_comment = {});
/// Largest player index referenced, as a count (1-based maximum).
std::size_t player_count(const std::vector<MatchRecord>& matches);

/// Random matches between disjoint teams of 1-3 players drawn from
/// `strengths.size()` players; team T1 beats T2 with probability
/// sum_{T1} p / sum_{T1 u T2} p.
std::vector<MatchRecord> make_synthetic_matches(const Vector& strengths, std::size_t count,
                                                Rng& rng);

// Edge files: first non-comment line holds the node count m, then one
// "i j y" line per observed unordered pair, 1-based, y in {0, 1}.

struct EdgeObservation {
  std::size_t i;
  std::size_t j;
  bool edge;
};

struct EdgeList {
  std::size_t nodes = 0;
  std::vector<EdgeObservation> pairs;
};

EigenmodelData edges_to_data(const EdgeList& edges);
EdgeList data_to_edges(const EigenmodelData& data);

EigenmodelData parse_edges(std::istream& in);
EigenmodelData load_edges(const std::filesystem::path& path);
void save_edges(const EigenmodelData& data, const std::filesystem::path& path);

// Trace CSV: header "step,<coordinate columns>,accepted,delta_H,log_density",
// one row per sample, doubles in shortest round-trip form.

std::vector<std::string> coordinate_columns(std::size_t n);
std::vector<std::string> eigenmodel_columns(std::size_t m, std::size_t p);

std::string format_double(double value);
double parse_double(const std::string& text);

void write_trace(const ChainTrace& trace, const std::filesystem::path& path,
                 const std::vector<std::string>& columns);
void write_trace(const ChainTrace& trace, const std::filesystem::path& path);

struct TraceFile {
  std::vector<std::string> columns;
  ChainTrace trace;
};
TraceFile read_trace(const std::filesystem::path& path);

}  // namespace geomc

#endif  // GEOMC_IO_HPP
