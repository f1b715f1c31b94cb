/*
 * Copyright 2026 The mprlab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

#pragma once

// CTS/ACK frames carrying up to M receiver addresses.
//
// Layout (big-endian multi-byte fields):
//   frame control (2) | duration (2) | M' x receiver address (6) |
//   recipient count (1) | FCS placeholder (4, zero)
// With M' = 1 the frame is the same for every M.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mprlab::mac {

/// 48-bit MAC address held in the low bits.
using MacAddress = std::uint64_t;

inline constexpr std::uint16_t kCtsFrameControl = 0x00C4;
inline constexpr std::uint16_t kAckFrameControl = 0x00D4;
inline constexpr std::size_t kAddressBytes = 6;
/// Frame length with a single recipient.
inline constexpr std::size_t kBaseFrameBytes = 2 + 2 + kAddressBytes + 1 + 4;

struct MprFrame {
  std::uint16_t frame_control = kCtsFrameControl;
  std::uint16_t duration = 0;
  std::vector<MacAddress> receivers;

  bool operator==(const MprFrame&) const = default;
};

std::size_t frame_bytes(std::size_t recipients);

/// Throws CapabilityExceeded when addresses.size() is 0 or > M, InvalidArgument
/// for an address wider than 48 bits.
std::vector<std::uint8_t> encode_cts(std::span<const MacAddress> addresses, int M,
                                     std::uint16_t duration = 0,
                                     std::uint16_t frame_control = kCtsFrameControl);

/// Throws FrameError for a malformed frame, CapabilityExceeded for more than M recipients.
MprFrame decode_cts(std::span<const std::uint8_t> bytes, int M);

}  // namespace mprlab::mac
