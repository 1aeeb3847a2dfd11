#include "hyperproc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyperproc/errors.hpp"

namespace hyperproc {

std::string format_double(double v) {
    char buf[32];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

std::string to_text(const Hypergraph& h) {
    std::ostringstream out;
    out << "N " << h.num_vertices() << "\n";
    for (const auto& e : h.edges()) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (i > 0) out << ' ';
            out << e[i];
        }
        out << "\n";
    }
    return out.str();
}

Hypergraph hypergraph_from_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty hypergraph file");
    std::istringstream header(line);
    std::string tag;
    int n = -1;
    header >> tag >> n;
    if (tag != "N" || n < 0) {
        throw DomainError("hypergraph text must start with 'N <num_vertices>'");
    }
    Hypergraph h(n);
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::vector<VertexId> vertices;
        VertexId v;
        while (row >> v) vertices.push_back(v);
        h.insert_edge(std::move(vertices));
    }
    return h;
}

Hypergraph hypergraph_from_text(const std::string& text) {
    std::istringstream in(text);
    return hypergraph_from_text(in);
}

nlohmann::json to_json(const Hypergraph& h) {
    nlohmann::json j;
    j["n"] = h.num_vertices();
    j["edges"] = h.edges();
    return j;
}

Hypergraph hypergraph_from_json(const nlohmann::json& j) {
    Hypergraph h(j.at("n").get<int>());
    for (const auto& edge : j.at("edges")) {
        h.insert_edge(edge.get<std::vector<VertexId>>());
    }
    return h;
}

std::string to_csv(const EventStream& stream) {
    std::ostringstream out;
    out << "tau,k,vertices\n";
    for (const auto& event : stream.events) {
        out << format_double(event.time) << ',' << event.cardinality << ',';
        for (size_t i = 0; i < event.vertices.size(); ++i) {
            if (i > 0) out << ';';
            out << event.vertices[i];
        }
        out << "\n";
    }
    return out.str();
}

EventStream event_stream_from_csv(std::istream& in, int num_vertices,
                                  double horizon) {
    EventStream stream;
    stream.num_vertices = num_vertices;
    stream.horizon = horizon;
    std::string line;
    if (!std::getline(in, line) || line != "tau,k,vertices") {
        throw DomainError("event CSV must start with 'tau,k,vertices'");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t c1 = line.find(',');
        const size_t c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw DomainError("malformed event row: " + line);
        }
        EventStream::Event event;
        event.time = std::stod(line.substr(0, c1));
        event.cardinality = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
        const std::string verts = line.substr(c2 + 1);
        if (!verts.empty()) {
            std::istringstream vs(verts);
            std::string item;
            while (std::getline(vs, item, ';')) {
                event.vertices.push_back(std::stoi(item));
            }
        }
        stream.events.push_back(std::move(event));
    }
    return stream;
}

namespace {

nlohmann::json jump_to_json(const EnvelopeJump& jump) {
    nlohmann::json j;
    j["s"] = jump.time;
    j["before"] = jump.lower;
    j["after"] = jump.upper;
    j["after_clamped"] = jump.upper_clamped;
    return j;
}

} // namespace

nlohmann::json to_json(const StructureProfile& profile) {
    nlohmann::json j;
    j["classification"] = to_string(profile.classification);
    j["rho"] = profile.mixing.coeffs();
    j["grid_resolution"] = profile.options.grid_resolution;
    j["root_tolerance"] = profile.options.root_tolerance;
    j["stationary_points"] = profile.stationary_points;
    j["lower_envelope_jumps"] = nlohmann::json::array();
    for (const auto& jump : profile.lower_jumps) {
        j["lower_envelope_jumps"].push_back(jump_to_json(jump));
    }
    j["upper_envelope_jumps"] = nlohmann::json::array();
    for (const auto& jump : profile.upper_jumps) {
        j["upper_envelope_jumps"].push_back(jump_to_json(jump));
    }
    return j;
}

std::string envelope_table_csv(const std::vector<EnvelopeTableRow>& rows) {
    std::ostringstream out;
    out << "s,g,g_star\n";
    for (const auto& row : rows) {
        out << format_double(row.s) << ',' << format_double(row.lower) << ','
            << format_double(row.upper) << "\n";
    }
    return out.str();
}

std::vector<double> coefficients_from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array()) throw DomainError("mixture coefficients must be a JSON array");
    return j.get<std::vector<double>>();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << contents;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace hyperproc
