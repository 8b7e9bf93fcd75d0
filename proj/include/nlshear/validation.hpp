// validation.hpp
//
// Fixed self-check suites behind `nonlocal-shear validate`. Each row compares
// one measured value against a threshold; a suite passes when every row does.

#ifndef NLSHEAR_VALIDATION_HPP
#define NLSHEAR_VALIDATION_HPP

#include <ostream>
#include <string>
#include <vector>

namespace nlshear {

struct ValidationRow {
    std::string suite;
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation; // "<=", ">=", "=="
    bool pass = false;
    std::string note;
};

std::vector<ValidationRow> validate_kernels();
std::vector<ValidationRow> validate_oracles();
std::vector<ValidationRow> validate_convergence();

/// Dispatches on "kernels", "oracles" or "convergence"; throws
/// std::invalid_argument otherwise.
std::vector<ValidationRow> run_validation(const std::string& what);

void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows);
void print_validation_table(std::ostream& out, const std::vector<ValidationRow>& rows);

} // namespace nlshear

#endif
