#pragma once

#include <array>
#include <string_view>

namespace qoesched::sim {

inline constexpr int kMinCqi = 0;
inline constexpr int kMaxCqi = 15;

/// Resource elements carried by one PRB in one TTI: 12 subcarriers x 14 OFDM symbols.
inline constexpr double kResourceElementsPerPrb = 12 * 14;

struct CqiMcsEntry {
    int cqi;
    std::string_view modulation;  // "None" for CQI 0
    int code_rate_x1024;          // 0 for CQI 0
    double efficiency;            // useful bits per resource element
};

/// 4-bit CQI table (QPSK up to 256QAM).
class CqiMcsTable {
public:
    static const CqiMcsTable& standard();

    const CqiMcsEntry& entry(int cqi) const;
    double efficiency(int cqi) const { return entry(cqi).efficiency; }

    const std::array<CqiMcsEntry, kMaxCqi + 1>& rows() const { return rows_; }

private:
    explicit constexpr CqiMcsTable(const std::array<CqiMcsEntry, kMaxCqi + 1>& rows) : rows_(rows) {}

    std::array<CqiMcsEntry, kMaxCqi + 1> rows_;
};

/// Useful bits one PRB carries in one TTI for a UE reporting `cqi`. Zero for CQI 0.
/// Throws std::out_of_range outside [0, 15].
double prb_capacity_bits(int cqi);

}  // namespace qoesched::sim
