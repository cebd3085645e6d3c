#include "qoesched/sim/cqi_mcs.hpp"

#include <stdexcept>
#include <string>

namespace qoesched::sim {

const CqiMcsTable& CqiMcsTable::standard() {
    static const CqiMcsTable table({{
        {0, "None", 0, 0.0},
        {1, "QPSK", 78, 0.1523},
        {2, "QPSK", 193, 0.3770},
        {3, "QPSK", 449, 0.8770},
        {4, "16QAM", 378, 1.4766},
        {5, "16QAM", 490, 1.9141},
        {6, "16QAM", 616, 2.4063},
        {7, "64QAM", 466, 2.7305},
        {8, "64QAM", 567, 3.3223},
        {9, "64QAM", 666, 3.9023},
        {10, "64QAM", 772, 4.5234},
        {11, "64QAM", 873, 5.1152},
        {12, "256QAM", 711, 5.5547},
        {13, "256QAM", 797, 6.2266},
        {14, "256QAM", 885, 6.9141},
        {15, "256QAM", 948, 7.4063},
    }});
    return table;
}

const CqiMcsEntry& CqiMcsTable::entry(int cqi) const {
    if (cqi < kMinCqi || cqi > kMaxCqi) {
        throw std::out_of_range("CQI out of range: " + std::to_string(cqi));
    }
    return rows_[static_cast<std::size_t>(cqi)];
}

double prb_capacity_bits(int cqi) {
    return CqiMcsTable::standard().efficiency(cqi) * kResourceElementsPerPrb;
}

}  // namespace qoesched::sim
