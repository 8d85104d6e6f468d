#pragma once

#include <ostream>

#include "reptalk/oracle.hpp"
#include "reptalk/regions.hpp"

namespace reptalk {

class JsonWriter;

// JSON shapes are flat objects keyed by the field names; reals carry 12
// significant digits so emitted files are stable across platforms.
void write_assumption_report_json(std::ostream& os, const AssumptionReport& rep);
void write_solution_json(std::ostream& os, const EquilibriumSolution& sol);
void write_region_report_json(JsonWriter& w, const RegionReport& rep);
void write_oracle_report_json(std::ostream& os, double beta,
                              const OracleReport& rep, bool mc_agrees,
                              std::uint64_t seed, std::uint64_t draws);

// Fixed profile CSV header; failed rows leave the value cells empty and
// carry the reason in the trailing error column.
extern const char* const kProfileCsvHeader;
void write_profile_csv(std::ostream& os, const PayoffProfile& profile);

}  // namespace reptalk
