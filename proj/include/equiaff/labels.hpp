#pragma once

// String labels addressing the built-in model zoo:
//   quadric:<kind>:<n>        kind: ellipsoid | paraboloid | hyperboloid
//                             (synonyms elliptic, parabolic, hyperbolic)
//   flat:<n>                  flat hypersphere x^1 ... x^{n+1} = 1
//   perturbed-paraboloid:<n>  negative control, cubic form not parallel
//   slr:<m> | slc:<m> | suh:<m>  matrix symmetric-space hyperspheres
//   e6f4                      exceptional 26-dimensional hypersphere

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "equiaff/chart.hpp"

namespace equiaff {

class LabelError : public std::runtime_error {
 public:
  explicit LabelError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResolvedModel {
  std::string label;   // canonical spelling
  std::string family;  // quadric | flat | control | matrix | jordan
  ChartPtr chart;
  bool hypersphere = false;     // B = L1 * id expected
  bool centered = false;        // xi = -L1 x expected
  bool parallel_cubic = false;  // nabla A = 0 expected
  bool long_running = false;    // pipeline runs are gated behind --long
  bool has_closed_form_L1 = false;
  double closed_form_L1 = 0.0;
  // Named algebraic audits of the model's construction data; empty when the
  // family has none. Each value should be ~0.
  std::function<std::vector<std::pair<std::string, double>>()> audits;
};

// Throws LabelError for unknown names or out-of-range parameters.
ResolvedModel resolve_label(const std::string& label);

struct CatalogEntry {
  std::string label;
  int n = 0;
  std::string family;
  std::string backend;  // default derivative backend
  std::string note;
};

// Entries shown by the list command, in fixed order.
std::vector<CatalogEntry> model_catalog();

// One line per entry: "<label> n=<n> family=<family> backend=<backend> <note>".
std::string catalog_text();

}  // namespace equiaff
