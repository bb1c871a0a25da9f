#include "divgnn/tudataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "divgnn/errors.hpp"

namespace divgnn {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

long parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) throw format_error(where + ": trailing characters in '" + s + "'");
    return v;
  } catch (const format_error&) {
    throw;
  } catch (const std::exception&) {
    throw format_error(where + ": not an integer: '" + s + "'");
  }
}

std::pair<long, long> parse_edge(const std::string& line, const std::string& where) {
  std::string s = line;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream iss(s);
  long a, b;
  if (!(iss >> a >> b)) throw format_error(where + ": bad edge line '" + line + "'");
  std::string rest;
  if (iss >> rest) throw format_error(where + ": extra tokens in edge line '" + line + "'");
  return {a, b};
}

}  // namespace

Dataset load_tudataset(const std::string& dir, const std::string& name) {
  namespace fs = std::filesystem;
  const std::string base = (fs::path(dir) / name / name).string() + "_";

  auto indicator_lines = read_lines(base + "graph_indicator.txt");
  auto graph_label_lines = read_lines(base + "graph_labels.txt");

  const std::size_t num_nodes_total = indicator_lines.size();
  std::vector<long> node_raw_labels(num_nodes_total);
  if (fs::exists(base + "node_labels.txt")) {
    auto node_label_lines = read_lines(base + "node_labels.txt");
    if (node_label_lines.size() != num_nodes_total)
      throw format_error(name + ": node label count (" + std::to_string(node_label_lines.size()) +
                         ") != graph indicator count (" + std::to_string(num_nodes_total) + ")");
    for (std::size_t i = 0; i < num_nodes_total; ++i)
      node_raw_labels[i] = parse_int(node_label_lines[i], name + "_node_labels");
  } else if (fs::exists(base + "node_attributes.txt")) {
    // attributed variant: only the leading (atom type) column is ingested
    auto attr_lines = read_lines(base + "node_attributes.txt");
    if (attr_lines.size() != num_nodes_total)
      throw format_error(name + ": node attribute count != graph indicator count");
    for (std::size_t i = 0; i < num_nodes_total; ++i) {
      std::string s = attr_lines[i];
      std::replace(s.begin(), s.end(), ',', ' ');
      std::istringstream iss(s);
      double v;
      if (!(iss >> v)) throw format_error(name + "_node_attributes: bad line '" + attr_lines[i] + "'");
      node_raw_labels[i] = std::lround(v);
    }
  } else {
    throw io_error("cannot open " + base + "node_labels.txt");
  }

  // graph membership and local indices (0-based, in order of global id)
  const std::size_t num_graphs = graph_label_lines.size();
  std::vector<long> node_graph(num_nodes_total);
  std::vector<int> node_local(num_nodes_total);
  std::vector<int> graph_sizes(num_graphs, 0);
  for (std::size_t i = 0; i < num_nodes_total; ++i) {
    long gid = parse_int(indicator_lines[i], name + "_graph_indicator");
    if (gid < 1 || gid > (long)num_graphs)
      throw format_error(name + ": graph indicator " + std::to_string(gid) +
                         " outside [1, " + std::to_string(num_graphs) + "]");
    node_graph[i] = gid - 1;
    node_local[i] = graph_sizes[gid - 1]++;
  }
  for (std::size_t g = 0; g < num_graphs; ++g)
    if (graph_sizes[g] == 0)
      throw format_error(name + ": graph " + std::to_string(g + 1) +
                         " has a label but no nodes in the indicator");

  Dataset d;
  d.graphs.resize(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    d.graphs[g].num_nodes = graph_sizes[g];
    d.graphs[g].node_category.resize(graph_sizes[g], -1);
    d.graphs[g].graph_id = name + "#" + std::to_string(g + 1);
  }

  // node categories via the sorted raw-label vocabulary
  {
    std::set<long> vocab(node_raw_labels.begin(), node_raw_labels.end());
    d.node_label_vocab.assign(vocab.begin(), vocab.end());
    std::map<long, int> dense;
    for (std::size_t i = 0; i < d.node_label_vocab.size(); ++i)
      dense[d.node_label_vocab[i]] = (int)i;
    d.category_count = (int)d.node_label_vocab.size();
    for (std::size_t i = 0; i < num_nodes_total; ++i)
      d.graphs[node_graph[i]].node_category[node_local[i]] = dense[node_raw_labels[i]];
  }

  // edges: 1-based global ids, both directions usually present
  {
    auto edge_lines = read_lines(base + "A.txt");
    std::vector<std::set<std::pair<int, int>>> edge_sets(num_graphs);
    for (const std::string& line : edge_lines) {
      auto [a, b] = parse_edge(line, name + "_A");
      if (a < 1 || a > (long)num_nodes_total || b < 1 || b > (long)num_nodes_total)
        throw format_error(name + ": edge references unknown node (" + line + ")");
      long ga = node_graph[a - 1], gb = node_graph[b - 1];
      if (ga != gb)
        throw format_error(name + ": edge crosses graphs (" + line + ")");
      if (a == b) continue;  // self-loops dropped
      int u = node_local[a - 1], v = node_local[b - 1];
      if (u > v) std::swap(u, v);
      edge_sets[ga].insert({u, v});
    }
    for (std::size_t g = 0; g < num_graphs; ++g)
      d.graphs[g].edges.assign(edge_sets[g].begin(), edge_sets[g].end());
  }

  // graph labels: all-integer files define a classification task with a
  // sorted dense class vocabulary
  {
    std::vector<long> raw(num_graphs);
    for (std::size_t g = 0; g < num_graphs; ++g)
      raw[g] = parse_int(graph_label_lines[g], name + "_graph_labels");
    std::set<long> vocab(raw.begin(), raw.end());
    d.class_vocab.assign(vocab.begin(), vocab.end());
    std::map<long, int> dense;
    for (std::size_t i = 0; i < d.class_vocab.size(); ++i) dense[d.class_vocab[i]] = (int)i;
    d.class_count = (int)d.class_vocab.size();
    d.task_kind = TaskKind::classification;
    for (std::size_t g = 0; g < num_graphs; ++g) {
      d.graphs[g].label = dense[raw[g]];
      d.graphs[g].target = double(raw[g]);
    }
  }

  for (const Graph& g : d.graphs) validate_graph(g);
  return d;
}

}  // namespace divgnn
