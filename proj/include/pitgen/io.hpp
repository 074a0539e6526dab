#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pitgen/generators.hpp"
#include "pitgen/models.hpp"
#include "pitgen/pit.hpp"
#include "pitgen/rank.hpp"

namespace pitgen {

// Malformed input files; the message names the offending field.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using json = nlohmann::json;

json to_json(const SparsePoly& f);
SparsePoly sparse_poly_from_json(const json& j);

enum class CircuitKind { roabp, matrix_roabp, smabp, diagonal };

struct Circuit {
  CircuitKind kind = CircuitKind::roabp;
  Field field{2};
  std::size_t n = 0;  // number of variables
  std::uint32_t d = 1;
  std::size_t r = 1;
  Roabp roabp;  // roabp and matrix-roabp (left/right unused for the latter)
  Smabp smabp;
  DiagonalCircuit diagonal;

  std::size_t arity() const;
  // Nonzero iff the circuit (every output entry, for matrix-roabp) is nonzero there.
  Felt eval(const std::vector<Felt>& x) const;
  // The circuit's polynomial; for matrix-roabp, the entries row-major.
  std::vector<SparsePoly> expand() const;
  DegreeBounds degree_bounds() const;
};

const char* to_string(CircuitKind k);
Circuit circuit_from_json(const json& j);
Circuit load_circuit(const std::string& path);
json to_json(const Circuit& c);

json to_json(const GeneratorMap& g);
json to_json(const PitVerdict& v);
json to_json(const SuiteReport& r);
json to_json(const RankReport& r);

// Header x1..xn, then one decimal point per row; LF line endings.
void write_csv_header(std::ostream& os, std::size_t n);
void write_csv_row(std::ostream& os, const std::vector<Felt>& x);

}  // namespace pitgen
