#pragma once

#include <string>

#include "divgnn/graph.hpp"

namespace divgnn {

// Parses the TUDataset raw text format from dir/name/name_*.txt.
// Required files: _A.txt, _graph_indicator.txt, _graph_labels.txt and
// _node_labels.txt (if the latter is absent, the first column of
// _node_attributes.txt is used as the category, rounded to integer).
// The raw format lists each edge in both directions; the loader also accepts
// files missing mirrors and still produces one undirected edge. Self-loops
// are dropped. Node and class label values are remapped to dense 0-based ids
// through their sorted vocabularies.
Dataset load_tudataset(const std::string& dir, const std::string& name);

}  // namespace divgnn
