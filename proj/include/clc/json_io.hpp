#pragma once

#include <string>
#include <vector>

#include "clc/config.hpp"

namespace clc {

// Configuration files carry "pca_version": 1 and the nested member schema.
// parse(serialize(c)) is canonical-equal to c; doubles round-trip exactly.
std::string serialize_config(const Configuration& config);
Configuration parse_config(const std::string& text);

std::string serialize_polynomial(const std::vector<Cpx>& coeffs, double canonical_angle = 0);
std::vector<Cpx> parse_polynomial(const std::string& text, double* canonical_angle = nullptr);

std::string serialize_domain(const std::vector<Cpx>& polygon);
std::vector<Cpx> parse_domain(const std::string& text);

struct ModelReport {
    double max_model_error = 0;
    int injectivity_violations = 0;
    long long samples = 0;
    int cell_count = 0;
    double boundary_continuity_error = 0;
    bool success() const;
};

std::string serialize_report(const ModelReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace clc
