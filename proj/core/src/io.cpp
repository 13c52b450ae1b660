#include "symtan/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace symtan {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string json_int_array(const std::vector<int>& v) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << "]";
  return os.str();
}

std::string json_double_array(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << fmt_double(v[i]);
  }
  os << "]";
  return os.str();
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string character_table_json(const CharacterTable& tbl) {
  std::ostringstream os;
  os << "{\n  \"d\": " << tbl.d << ",\n  \"classes\": [";
  for (size_t c = 0; c < tbl.classes.size(); ++c) {
    if (c) os << ", ";
    os << json_int_array(tbl.classes[c].mult);
  }
  os << "],\n  \"rows\": [\n";
  for (size_t r = 0; r < tbl.partitions.size(); ++r) {
    os << "    { \"partition\": " << json_int_array(tbl.partitions[r].parts) << ", \"values\": [";
    for (size_t c = 0; c < tbl.values[r].size(); ++c) {
      if (c) os << ", ";
      os << tbl.values[r][c];
    }
    os << "] }";
    if (r + 1 < tbl.partitions.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string decomposition_json(const RepId& rep, const Decomposition& dec) {
  std::ostringstream os;
  os << "{\n  \"rep\": \"" << json_escape(rep.name()) << "\",\n  \"d\": " << rep.d
     << ",\n  \"entries\": [\n";
  for (size_t i = 0; i < dec.entries.size(); ++i) {
    const auto& e = dec.entries[i];
    os << "    { \"partition\": " << json_int_array(e.lambda.parts)
       << ", \"multiplicity\": " << e.multiplicity << ", \"degree\": " << irrep_degree(e.lambda)
       << " }";
    if (i + 1 < dec.entries.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string arcs_json(const std::vector<ArcJet>& arcs) {
  std::ostringstream os;
  os << "{\n  \"arcs\": [\n";
  for (size_t a = 0; a < arcs.size(); ++a) {
    const ArcJet& arc = arcs[a];
    os << "    { \"order\": " << arc.order << ", \"eta\": "
       << json_double_array(std::vector<double>(arc.eta.begin(), arc.eta.end())) << ", \"v\": [";
    for (size_t i = 0; i < arc.v.size(); ++i) {
      if (i) os << ", ";
      std::vector<double> vi(arc.v[i].data(), arc.v[i].data() + arc.v[i].size());
      os << json_double_array(vi);
    }
    os << "] }";
    if (a + 1 < arcs.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

namespace {

const char* propc_status_str(PropCStatus s) {
  switch (s) {
    case PropCStatus::pass: return "pass";
    case PropCStatus::fail: return "fail";
    case PropCStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace

std::string property_c_json(const PropertyCReport& rep) {
  std::ostringstream os;
  os << "{\n  \"overall\": \"" << propc_status_str(rep.overall) << "\",\n  \"eigenvalues\": [\n";
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    const auto& pe = rep.eigenvalues[i];
    os << "    { \"eta0\": " << fmt_double(pe.eta0) << ", \"eigenspace_dim\": " << pe.eigenspace_dim
       << ", \"pairs_found\": " << pe.pairs_found << ", \"min_regularity\": "
       << fmt_double(pe.min_regularity) << ", \"status\": \"" << propc_status_str(pe.status) << "\" }";
    if (i + 1 < rep.eigenvalues.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string critical_point_json(const CriticalPoint& cp) {
  std::ostringstream os;
  os << "{\n  \"W\": [";
  for (int i = 0; i < cp.w.rows(); ++i) {
    if (i) os << ", ";
    std::vector<double> row(cp.w.cols());
    for (int j = 0; j < cp.w.cols(); ++j) row[j] = cp.w(i, j);
    os << json_double_array(row);
  }
  os << "],\n  \"alpha\": ";
  std::vector<double> al(cp.alpha.data(), cp.alpha.data() + cp.alpha.size());
  os << json_double_array(al);
  os << ",\n  \"loss\": " << fmt_double(cp.loss) << ",\n  \"grad_norm\": " << fmt_double(cp.grad_norm)
     << ",\n  \"isotropy\": \"" << json_escape(cp.isotropy) << "\",\n  \"hessian_extremal_type\": \""
     << cp.extremal_type << "\",\n  \"converged\": " << (cp.converged ? "true" : "false") << "\n}\n";
  return os.str();
}

std::string cluster_report_json(const ClusterReport& rep) {
  std::ostringstream os;
  os << "{\n  \"clusters\": [\n";
  for (size_t i = 0; i < rep.clusters.size(); ++i) {
    const auto& c = rep.clusters[i];
    os << "    { \"center\": " << fmt_double(c.center) << ", \"width\": " << fmt_double(c.width)
       << ", \"multiplicity\": " << c.multiplicity << ", \"table_match\": ";
    if (c.table_match) {
      os << "\"" << json_escape(*c.table_match) << "\"";
    } else {
      os << "null";
    }
    os << " }";
    if (i + 1 < rep.clusters.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string isotropy_json(const IsotropyResult& iso) {
  std::ostringstream os;
  os << "{\n  \"label\": \"" << json_escape(iso.label) << "\",\n  \"order\": " << iso.order.get_str()
     << ",\n  \"heuristic_only\": " << (iso.heuristic_only ? "true" : "false")
     << ",\n  \"generators\": [";
  for (size_t i = 0; i < iso.generators.size(); ++i) {
    if (i) os << ", ";
    os << json_int_array(iso.generators[i]);
  }
  os << "]\n}\n";
  return os.str();
}

std::string block_spectrum_json(const BlockSpectrum& bs) {
  std::ostringstream os;
  os << "{\n  \"ambient_dim\": " << bs.ambient_dim << ",\n  \"blocks\": [\n";
  for (size_t i = 0; i < bs.blocks.size(); ++i) {
    const auto& b = bs.blocks[i];
    os << "    { \"partition\": " << json_int_array(b.lambda.parts) << ", \"degree\": " << b.degree
       << ", \"eigenvalues\": " << json_double_array(b.eigenvalues) << " }";
    if (i + 1 < bs.blocks.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string polylines_csv(const std::vector<Polyline>& lines) {
  std::ostringstream os;
  os << "segment_id,x,y\n";
  for (size_t s = 0; s < lines.size(); ++s) {
    for (const auto& p : lines[s].pts) {
      os << s << "," << fmt_double(p.x()) << "," << fmt_double(p.y()) << "\n";
    }
  }
  return os.str();
}

std::string invariant_basis_text(const InvariantBasis& basis) {
  std::ostringstream os;
  os << "# invariant basis: rep=" << basis.rep.name() << " degree=" << basis.degree
     << " d=" << basis.rep.d << " count=" << basis.elements.size() << "\n";
  for (const auto& el : basis.elements) {
    os << "# seed: " << el.seed_name << "\n";
    os << el.poly.to_string() << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << contents;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace symtan
