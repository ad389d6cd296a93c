#pragma once

#include <random>
#include <string>

#include "deepind/core.hpp"
#include "deepind/syntax.hpp"

namespace deepind {
namespace testsupport {

std::string slurp(const std::string& path);
std::string corpus_path(const std::string& name);
std::string golden_path(const std::string& name);

// Parses and lowers a corpus module; throws on any diagnostic.
Module load_corpus(const std::string& name);

// Henry-Ford-encodes every declaration in place.
Module encoded(const Module& m);

// Grammar-conforming random GADT declarations for the structural soundness
// sweep: at most 3 constructors, 3 binders and shape depth 3.
Module random_gadt_module(std::mt19937& rng);

}  // namespace testsupport
}  // namespace deepind
