#pragma once

#include <string>

#include "combforge/evolve.hpp"
#include "combforge/spectra.hpp"
#include "combforge/stationary.hpp"

#include "json.hpp"

namespace cf {

using Json = nlohmann::ordered_json;

// 17 significant digits; shortest round-trip is not required, stability is.
std::string format17(double v);

Json solution_to_json(const Solution& sol);
Solution solution_from_json(const Json& j);

// CSV bodies (header row + data rows, '\n' line ends, 17 significant digits)
std::string solution_csv(const Solution& sol);
std::string comb_csv(const Comb& c);
std::string sweep_csv(const BlochSweep& sw);
std::string trace_csv(const EvolutionTrace& tr);

Json sweep_to_json(const BlochSweep& sw);
Json small_eigs_to_json(const SmallEigReport& rep);
Json curve_fit_to_json(const CurveFit& fit);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace cf
