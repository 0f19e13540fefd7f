#ifndef STK_JSON_IO_HPP
#define STK_JSON_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "stk/balance.hpp"
#include "stk/graph.hpp"
#include "stk/model.hpp"
#include "stk/staged_tree.hpp"
#include "stk/toric.hpp"

namespace stk {

using Json = nlohmann::json;

/// Reads and parses a JSON file; throws ParseError with the file name on
/// failure.
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// DAG files: {"p": 4, "edges": [[1,3],[2,3]]}, 1-based, duplicates rejected.
Dag dag_from_json(const Json& j);
Json dag_to_json(const Dag& g);

// Staged-tree files: {"order":[...], "cardinalities":[...],
// "stages":[ per level 1..p-1: [ [ [prefix], ... ], ... ] ]}. Labels are
// derived from the staging, never serialized.
StagedTree tree_from_json(const Json& j, std::uint64_t max_leaves = StagedTree::kDefaultMaxLeaves);
Json tree_to_json(const StagedTree& t);

// Distribution files: {"order":[...], "cardinalities":[...],
// "probabilities":[{"outcome":[...], "p":"num/den"}]}; exact rationals as
// strings. "cardinalities" may be omitted on input.
LeafDistribution dist_from_json(const Json& j);
Json dist_to_json(const LeafDistribution& f);

Json validation_report_to_json(const StagedTree& t, const ValidationReport& rep);
Json balance_report_to_json(const StagedTree& t, const BalanceReport& rep);
Json relations_to_json(const ExponentMatrix& m, const std::vector<BinomialRelation>& rels);
Json vanishing_report_to_json(const ExponentMatrix& m, const VanishingReport& rep);

/// True when the JSON object looks like a DAG file rather than a tree file.
bool looks_like_dag(const Json& j);

}  // namespace stk

#endif
