#ifndef HYPERPROC_IO_HPP
#define HYPERPROC_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperproc/hypergraph.hpp"
#include "hyperproc/sampler.hpp"
#include "hyperproc/structure.hpp"

namespace hyperproc {

// Text format: first line "N <num_vertices>", then one edge per line as
// space-separated vertex indices; a blank line is a debris edge.
std::string to_text(const Hypergraph& h);
Hypergraph hypergraph_from_text(std::istream& in);
Hypergraph hypergraph_from_text(const std::string& text);

// JSON format: {"n": N, "edges": [[...], ...]}.
nlohmann::json to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const nlohmann::json& j);

// Event stream CSV: header "tau,k,vertices", vertices semicolon-separated,
// empty for events whose cardinality exceeds N.
std::string to_csv(const EventStream& stream);
EventStream event_stream_from_csv(std::istream& in, int num_vertices,
                                  double horizon);

// Structure profile as JSON (classification, jump lists, stationary points).
nlohmann::json to_json(const StructureProfile& profile);

// (s, g, g*) table as CSV with header "s,g,g_star".
std::string envelope_table_csv(const std::vector<EnvelopeTableRow>& rows);

// Mixture coefficients from a JSON array ("[0.5, 0.5]").
std::vector<double> coefficients_from_json_text(const std::string& text);

// Deterministic shortest-roundtrip float formatting shared by all writers.
std::string format_double(double v);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

} // namespace hyperproc

#endif
