#pragma once

// File formats. Matrices are {"dim": n, "re": [[...]], "im": [[...]]} ("im"
// optional, "dim" present for square matrices); non-finite numbers are written
// as the strings "inf", "-inf" and "nan".

#include "qgeom/channels.hpp"
#include "qgeom/expsim.hpp"
#include "qgeom/meanslab.hpp"
#include "qgeom/states.hpp"
#include "qgeom/verify.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace qgeom {

using Json = nlohmann::ordered_json;

Json number_to_json(double x);
double number_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where = "matrix");
DensityMatrix density_from_json(const Json& j);

Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

/// Family description as read from a file. Kinds: unitary_orbit {rho0,
/// hamiltonian}, eigenvalue_path {lambda0, slope, basis?}, affine {rho0,
/// directions}. Unknown keys and other kinds are rejected with FormatError.
struct FamilySpec {
  std::string kind;
  Json source;
};
FamilySpec family_spec_from_json(const Json& j);
StateFamily build_family(const FamilySpec& spec);
Json unitary_orbit_to_json(const DensityMatrix& rho0, const HermitianMatrix& h);

Json suite_to_json(const SuiteResult& r);
SuiteResult suite_from_json(const Json& j);
Json mean_report_to_json(const MeanCheckReport& r);
Json estimate_to_json(const EstimateRecord& e);

/// Reads and parses a JSON file; missing files and syntax errors raise FormatError.
Json read_json_file(const std::string& path);

/// Number formatting shared by the CSV writers: %.17g, with inf/-inf/nan spelled out.
std::string format_number(double x);
void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace qgeom
