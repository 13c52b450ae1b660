#pragma once

#include <string>
#include <vector>

#include "symtan/invariants.hpp"
#include "symtan/isotypic.hpp"
#include "symtan/landscape.hpp"
#include "symtan/spectra.hpp"
#include "symtan/symgroup.hpp"
#include "symtan/tangency.hpp"

namespace symtan {

// All floats are serialized with 17 significant digits so equal inputs give
// byte-identical artifacts.
std::string fmt_double(double v);

std::string character_table_json(const CharacterTable& tbl);
std::string decomposition_json(const RepId& rep, const Decomposition& dec);
std::string arcs_json(const std::vector<ArcJet>& arcs);
std::string property_c_json(const PropertyCReport& rep);
std::string critical_point_json(const CriticalPoint& cp);
std::string cluster_report_json(const ClusterReport& rep);
std::string isotropy_json(const IsotropyResult& iso);
std::string block_spectrum_json(const BlockSpectrum& bs);

// CSV with header segment_id,x,y.
std::string polylines_csv(const std::vector<Polyline>& lines);

// One orbit sum per line, '#'-prefixed seed annotations.
std::string invariant_basis_text(const InvariantBasis& basis);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace symtan
