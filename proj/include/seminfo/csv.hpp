#pragma once

#include <string>
#include <vector>

#include "seminfo/experiments.hpp"
#include "seminfo/rate_fidelity.hpp"

namespace seminfo {

// Locale-independent numeric formatting with 12 significant digits.
// Infinities render as "inf" / "-inf".
std::string format_real(double value);

// s,R_bits,G_bits,converged,iterations
std::string rate_fidelity_csv(const std::vector<RateFidelityPoint>& curve);

// s,R_bits,D_bits,converged,iterations
std::string rate_distortion_csv(const std::vector<RateDistortionPoint>& curve);

// d,s,R,G
std::string curve_family_csv(const CurveFamilyResult& family);

// d,k,G_star,k_prime_flag
std::string depth_study_csv(const std::vector<DepthStudyResult>& studies);

// X,prediction,info_bits
std::string forecast_study_csv(const ForecastStudyResult& study);

}  // namespace seminfo
