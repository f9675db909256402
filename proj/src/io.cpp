#include "rnm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "rnm/errors.hpp"

namespace rnm {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

bool blank_or_comment(const std::string& line) {
    std::size_t i = line.find_first_not_of(" \t\r");
    return i == std::string::npos || line[i] == '#';
}

// Reads exactly `count` unsigned integers and nothing else from the rest of the line.
std::vector<unsigned long long> read_fields(std::istringstream& ss, std::size_t count, std::size_t line_no) {
    std::vector<unsigned long long> out;
    std::string tok;
    while (ss >> tok) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            parse_fail(line_no, "expected a non-negative integer, got '" + tok + "'");
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            parse_fail(line_no, "integer out of range '" + tok + "'");
        }
    }
    if (out.size() != count) parse_fail(line_no, "expected " + std::to_string(count) + " fields");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    return in;
}

}  // namespace

EdgeColoredGraph read_ecg(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    unsigned long long n = 0, k = 0;
    std::vector<Edge> edges;
    std::vector<VertexId> part_a;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "p") {
            if (have_header) parse_fail(line_no, "duplicate 'p' line");
            auto f = read_fields(ss, 2, line_no);
            n = f[0];
            k = f[1];
            have_header = true;
        } else if (!have_header) {
            parse_fail(line_no, "first line must be 'p <num_vertices> <num_colors>'");
        } else if (tag == "a") {
            auto f = read_fields(ss, 1, line_no);
            if (f[0] >= n) parse_fail(line_no, "part A vertex out of range");
            part_a.push_back(static_cast<VertexId>(f[0]));
        } else if (tag == "e") {
            auto f = read_fields(ss, 3, line_no);
            if (f[0] >= n || f[1] >= n) parse_fail(line_no, "vertex out of range");
            if (f[2] >= k) parse_fail(line_no, "color out of range");
            edges.push_back({static_cast<VertexId>(f[0]), static_cast<VertexId>(f[1]), static_cast<ColorId>(f[2])});
        } else {
            parse_fail(line_no, "unknown line type '" + tag + "'");
        }
    }
    if (!have_header) parse_fail(line_no, "missing 'p' line");
    EdgeColoredGraph g = EdgeColoredGraph::build(n, edges, k);
    if (!part_a.empty()) g.set_part_a(part_a);
    return g;
}

void write_ecg(std::ostream& out, const EdgeColoredGraph& g) {
    out << "p " << g.num_vertices() << ' ' << g.num_colors() << '\n';
    for (VertexId v : g.part_a()) out << "a " << v << '\n';
    for (const Edge& e : g.edges()) out << "e " << e.u << ' ' << e.v << ' ' << e.c << '\n';
}

EdgeColoredGraph load_ecg(const std::string& path) {
    auto in = open_in(path);
    return read_ecg(in);
}

void save_ecg(const std::string& path, const EdgeColoredGraph& g) {
    std::ostringstream ss;
    write_ecg(ss, g);
    write_file_atomic(path, ss.str());
}

RainbowMatching read_rmm(std::istream& in, const EdgeColoredGraph& g) {
    RainbowMatching m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag != "m") parse_fail(line_no, "unknown line type '" + tag + "'");
        auto f = read_fields(ss, 2, line_no);
        if (f[0] >= g.num_edges()) parse_fail(line_no, "unknown edge index " + std::to_string(f[0]));
        m.add(static_cast<EdgeId>(f[0]), static_cast<ColorId>(f[1]));
    }
    return m;
}

void write_rmm(std::ostream& out, const RainbowMatching& m) {
    for (const auto& en : m.entries) out << "m " << en.edge << ' ' << en.color << '\n';
}

RainbowMatching load_rmm(const std::string& path, const EdgeColoredGraph& g) {
    auto in = open_in(path);
    return read_rmm(in, g);
}

void save_rmm(const std::string& path, const RainbowMatching& m) {
    std::ostringstream ss;
    write_rmm(ss, m);
    write_file_atomic(path, ss.str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::ConfigInvalid, "cannot write " + tmp);
        out << content;
        if (!out) throw Error(ErrorCode::ConfigInvalid, "write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorCode::ConfigInvalid, "cannot rename " + tmp);
}

}  // namespace rnm
