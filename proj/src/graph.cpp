#include "qbl/graph.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qbl/error.hpp"
#include "qbl/rng.hpp"

namespace qbl {

std::vector<std::vector<int>> GraphInstance::adjacency() const {
  std::vector<std::vector<int>> neighbors(n);
  for (const auto& [i, j] : edges) {
    neighbors[i].push_back(j);
    neighbors[j].push_back(i);
  }
  return neighbors;
}

Assignment Assignment::from_index(std::uint64_t index, int n) {
  Assignment z;
  z.spins.resize(n);
  for (int i = 0; i < n; ++i) {
    z.spins[i] = ((index >> i) & 1ULL) ? -1 : +1;
  }
  return z;
}

std::uint64_t Assignment::to_index() const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] < 0) index |= (1ULL << i);
  }
  return index;
}

void validate(const GraphInstance& g) {
  require(g.n >= 2, ErrorKind::InvalidInstance, "vertex count must be at least 2");
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : g.edges) {
    require(0 <= i && i < j && j < g.n, ErrorKind::InvalidInstance,
            "edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    require(seen.insert({i, j}).second, ErrorKind::InvalidInstance,
            "duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

namespace {

std::string default_label(int n, double edge_prob, std::uint64_t seed) {
  char prob[32];
  std::snprintf(prob, sizeof prob, "%g", edge_prob);
  return "er" + std::to_string(n) + "_p" + prob + "_s" + std::to_string(seed);
}

}  // namespace

GraphInstance generate_er(int n, double edge_prob, std::uint64_t seed, const std::string& label) {
  require(n >= 2, ErrorKind::InvalidInstance, "vertex count must be at least 2");
  require(0.0 <= edge_prob && edge_prob <= 1.0, ErrorKind::InvalidInstance,
          "edge probability must lie in [0, 1]");

  GraphInstance g;
  g.n = n;
  g.seed = seed;
  g.label = label.empty() ? default_label(n, edge_prob, seed) : label;

  Xoshiro256pp rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < edge_prob) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

double average_degree(const GraphInstance& g) { return g.average_degree(); }

long cut_cost(const GraphInstance& g, const Assignment& z) {
  require(z.size() == g.n, ErrorKind::InvalidAssignment,
          "assignment has " + std::to_string(z.size()) + " spins for an order-" +
              std::to_string(g.n) + " graph");
  long cost = 0;
  for (const auto& [i, j] : g.edges) {
    cost += static_cast<long>(z.spins[i]) * z.spins[j];
  }
  return cost;
}

std::string to_json_string(const GraphInstance& g) {
  nlohmann::ordered_json doc;
  doc["n"] = g.n;
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& [i, j] : g.edges) edges.push_back({i, j});
  doc["seed"] = g.seed;
  doc["label"] = g.label;
  return doc.dump(2) + "\n";
}

GraphInstance instance_from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("instance JSON: ") + e.what());
  }
  GraphInstance g;
  try {
    g.n = doc.at("n").get<int>();
    for (const auto& pair : doc.at("edges")) {
      g.edges.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    g.seed = doc.value("seed", std::uint64_t{0});
    g.label = doc.value("label", std::string{});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("instance JSON: ") + e.what());
  }
  validate(g);
  return g;
}

void write_instance(const GraphInstance& g, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << to_json_string(g);
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

GraphInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return instance_from_json_string(buffer.str());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) fail(ErrorKind::Parse, path + ": " + e.what());
    throw;
  }
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInstance: return "invalid-instance";
    case ErrorKind::InvalidAssignment: return "invalid-assignment";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::MissingTableEntry: return "missing-table-entry";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::InconsistentInput: return "inconsistent-input";
    case ErrorKind::InvalidTemperature: return "invalid-temperature";
    case ErrorKind::DegenerateTemperature: return "degenerate-temperature";
    case ErrorKind::UnattainableTarget: return "unattainable-target";
    case ErrorKind::Io: return "io-error";
    case ErrorKind::Parse: return "parse-error";
  }
  return "error";
}

}  // namespace qbl
