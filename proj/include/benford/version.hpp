#ifndef BENFORD_VERSION_HPP
#define BENFORD_VERSION_HPP

namespace benford {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolName = "benford";

} // namespace benford

#endif // BENFORD_VERSION_HPP
