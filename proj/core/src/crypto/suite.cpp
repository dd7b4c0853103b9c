#include "pqm2m/crypto/suite.hpp"

#include <stdexcept>

namespace pqm2m::crypto {

namespace {

constexpr SuiteParams kLevel1{1312, 2420, 800, 768, 32, "ML-DSA-44", "ML-KEM-512", "SHA3-256"};
constexpr SuiteParams kLevel3{1952, 3309, 1184, 1088, 48, "ML-DSA-65", "ML-KEM-768", "SHA3-384"};
constexpr SuiteParams kLevel5{2592, 4627, 1568, 1568, 64, "ML-DSA-87", "ML-KEM-1024", "SHA3-512"};

}  // namespace

const SuiteParams& suite_params(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::L1: return kLevel1;
        case SecurityLevel::L3: return kLevel3;
        case SecurityLevel::L5: return kLevel5;
    }
    throw std::out_of_range("unknown security level");
}

std::optional<SecurityLevel> level_from_wire(uint8_t byte) {
    switch (byte) {
        case 0x01: return SecurityLevel::L1;
        case 0x03: return SecurityLevel::L3;
        case 0x05: return SecurityLevel::L5;
        default: return std::nullopt;
    }
}

std::optional<SecurityLevel> level_from_name(std::string_view name) {
    if (name == "L1" || name == "l1" || name == "1") return SecurityLevel::L1;
    if (name == "L3" || name == "l3" || name == "3") return SecurityLevel::L3;
    if (name == "L5" || name == "l5" || name == "5") return SecurityLevel::L5;
    return std::nullopt;
}

const char* level_name(SecurityLevel level) {
    switch (level) {
        case SecurityLevel::L1: return "L1";
        case SecurityLevel::L3: return "L3";
        case SecurityLevel::L5: return "L5";
    }
    return "?";
}

}  // namespace pqm2m::crypto
