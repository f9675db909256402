#pragma once

#include <iosfwd>
#include <string>

#include "rnm/graph.hpp"

namespace rnm {

// .ecg: "p <n> <k>", optional "a <v>" lines marking side A, then "e <u> <v> <c>" per edge.
EdgeColoredGraph read_ecg(std::istream& in);
void write_ecg(std::ostream& out, const EdgeColoredGraph& g);
EdgeColoredGraph load_ecg(const std::string& path);
void save_ecg(const std::string& path, const EdgeColoredGraph& g);

// .rmm: "m <edge-index> <c>" per entry. Edge indexes are checked against g.
RainbowMatching read_rmm(std::istream& in, const EdgeColoredGraph& g);
void write_rmm(std::ostream& out, const RainbowMatching& m);
RainbowMatching load_rmm(const std::string& path, const EdgeColoredGraph& g);
void save_rmm(const std::string& path, const RainbowMatching& m);

// Writes to path.tmp and renames, so readers never see a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rnm
