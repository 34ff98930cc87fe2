#pragma once

#include <string>

#include <json.hpp>

#include "wosnet/relu.hpp"
#include "wosnet/synthesis.hpp"

namespace wosnet::io {

using json = nlohmann::json;

// Network file: {"dims": [N0..NL], "layers": [{"A": row-major nested, "b": [...]}]}.
// Doubles are written in shortest round-trip form; save/load preserves eval
// outputs bit-exactly. Loading validates the dimension chain.
json network_to_json(const relu::ReluNet& net);
relu::ReluNet network_from_json(const json& j);
void save_network(const relu::ReluNet& net, const std::string& path);
relu::ReluNet load_network(const std::string& path);

// Tableau file: {"seed", "M", "M1", "M2", "eps", "hard_cap", "caps1", "caps2",
// "directions", "inner_points", "any_capped"}.
json tableau_to_json(const RandomTableau& tableau);
RandomTableau tableau_from_json(const json& j);
void save_tableau(const RandomTableau& tableau, const std::string& path);
RandomTableau load_tableau(const std::string& path);

json plan_to_json(const SynthesisPlan& plan);
SynthesisPlan plan_from_json(const json& j);

}  // namespace wosnet::io
