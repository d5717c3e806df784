#include "seminfo/csv.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace seminfo {

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
    return std::string(buffer, result.ptr);
}

std::string rate_fidelity_csv(const std::vector<RateFidelityPoint>& curve) {
    std::string out = "s,R_bits,G_bits,converged,iterations\n";
    for (const RateFidelityPoint& pt : curve) {
        out += format_real(pt.s);
        out += ',';
        out += format_real(pt.rate);
        out += ',';
        out += format_real(pt.fidelity);
        out += ',';
        out += pt.converged ? '1' : '0';
        out += ',';
        out += std::to_string(pt.iterations);
        out += '\n';
    }
    return out;
}

std::string rate_distortion_csv(const std::vector<RateDistortionPoint>& curve) {
    std::string out = "s,R_bits,D_bits,converged,iterations\n";
    for (const RateDistortionPoint& pt : curve) {
        out += format_real(pt.s);
        out += ',';
        out += format_real(pt.rate);
        out += ',';
        out += format_real(pt.distortion);
        out += ',';
        out += pt.converged ? '1' : '0';
        out += ',';
        out += std::to_string(pt.iterations);
        out += '\n';
    }
    return out;
}

std::string curve_family_csv(const CurveFamilyResult& family) {
    std::string out = "d,s,R,G\n";
    for (std::size_t c = 0; c < family.curves.size(); ++c) {
        for (const RateFidelityPoint& pt : family.curves[c]) {
            out += format_real(family.widths[c]);
            out += ',';
            out += format_real(pt.s);
            out += ',';
            out += format_real(pt.rate);
            out += ',';
            out += format_real(pt.fidelity);
            out += '\n';
        }
    }
    return out;
}

std::string depth_study_csv(const std::vector<DepthStudyResult>& studies) {
    std::string out = "d,k,G_star,k_prime_flag\n";
    for (const DepthStudyResult& study : studies) {
        for (const MatchingStudyPoint& pt : study.points) {
            out += format_real(study.width);
            out += ',';
            out += std::to_string(pt.bits);
            out += ',';
            out += format_real(pt.matched_fidelity);
            out += ',';
            out += pt.bits == study.saturation_bits ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string forecast_study_csv(const ForecastStudyResult& study) {
    std::string out = "X,prediction,info_bits\n";
    for (std::size_t c = 0; c < study.curves.size(); ++c) {
        for (std::size_t i = 0; i < study.alphabet.size(); ++i) {
            out += format_real(study.alphabet.values()[i]);
            out += ',';
            out += std::to_string(c);
            out += ',';
            out += format_real(study.curves[c].info_bits[i]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace seminfo
