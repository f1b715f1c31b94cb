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

#include "mprlab/cts_frame.hpp"

#include "mprlab/error.hpp"

namespace mprlab::mac {

namespace {

constexpr MacAddress kAddressMask = (MacAddress{1} << 48) - 1;

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

}  // namespace

std::size_t frame_bytes(std::size_t recipients) {
  return kBaseFrameBytes + (recipients - 1) * kAddressBytes;
}

std::vector<std::uint8_t> encode_cts(std::span<const MacAddress> addresses, int M,
                                     std::uint16_t duration, std::uint16_t frame_control) {
  if (M < 1) throw InvalidArgument("encode_cts: M must be >= 1");
  if (addresses.empty()) throw CapabilityExceeded("encode_cts: at least one recipient required");
  if (addresses.size() > static_cast<std::size_t>(M) || addresses.size() > 255)
    throw CapabilityExceeded("encode_cts: more recipients than the MPR capability");

  std::vector<std::uint8_t> out;
  out.reserve(frame_bytes(addresses.size()));
  put16(out, frame_control);
  put16(out, duration);
  for (MacAddress a : addresses) {
    if (a & ~kAddressMask) throw InvalidArgument("encode_cts: address wider than 48 bits");
    for (int shift = 40; shift >= 0; shift -= 8)
      out.push_back(static_cast<std::uint8_t>((a >> shift) & 0xFF));
  }
  out.push_back(static_cast<std::uint8_t>(addresses.size()));
  out.insert(out.end(), 4, 0);  // FCS placeholder
  return out;
}

MprFrame decode_cts(std::span<const std::uint8_t> bytes, int M) {
  if (M < 1) throw InvalidArgument("decode_cts: M must be >= 1");
  if (bytes.size() < kBaseFrameBytes) throw FrameError("decode_cts: frame too short");
  const std::size_t count = bytes[bytes.size() - 5];
  if (count == 0) throw FrameError("decode_cts: zero recipients");
  if (bytes.size() != frame_bytes(count))
    throw FrameError("decode_cts: length does not match the recipient count");
  if (count > static_cast<std::size_t>(M))
    throw CapabilityExceeded("decode_cts: more recipients than the MPR capability");

  MprFrame f;
  f.frame_control = get16(bytes, 0);
  f.duration = get16(bytes, 2);
  f.receivers.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    MacAddress a = 0;
    for (std::size_t j = 0; j < kAddressBytes; ++j) a = (a << 8) | bytes[4 + i * kAddressBytes + j];
    f.receivers.push_back(a);
  }
  return f;
}

}  // namespace mprlab::mac
