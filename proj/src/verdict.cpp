#include "opalg/verdict.hpp"

namespace opalg {

std::string describe(const Verdict& verdict) {
  if (verdict.pass) return "pass";
  std::string out = "fail";
  if (verdict.witness) {
    const Witness& w = *verdict.witness;
    if (!w.parameters.empty()) {
      out += " at parameters (";
      for (std::size_t i = 0; i < w.parameters.size(); ++i) out += (i ? ", " : "") + to_string(w.parameters[i]);
      out += ")";
    }
    if (!w.indices.empty()) {
      out += " at basis tuple (";
      for (std::size_t i = 0; i < w.indices.size(); ++i) out += (i ? ", " : "") + std::to_string(w.indices[i]);
      out += ")";
    } else if (!w.arguments.empty()) {
      out += " at arguments";
      for (const auto& a : w.arguments) out += " " + to_string(a);
    }
    if (w.lhs.dim() > 0 || w.rhs.dim() > 0) out += ": lhs=" + to_string(w.lhs) + " rhs=" + to_string(w.rhs);
  }
  if (!verdict.detail.empty()) out += (verdict.witness ? " (" + verdict.detail + ")" : ": " + verdict.detail);
  return out;
}

}  // namespace opalg
