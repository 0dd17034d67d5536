#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "kljn/network.hpp"

namespace kljn {

// Line-oriented network description. One record per line, fields as key=value
// separated by whitespace, '#' starts a comment:
//
//   defaults r_low=1000 r_high=10000 noise_scale=1e-6 wave_velocity=2e8
//            samples_per_bep=100 guard_fraction=0.05        (optional, once)
//   station id=A1 island=north kljn=yes qkd=no budget=2
//   link a=A1 b=A2 kind=wire length=1000 wires=1
//   link a=A1 b=B1 kind=satellite length=36000000 qkd=yes
//
// Links may reference stations declared later in the file.

NetworkSpec parse_network_spec(std::istream& in);
NetworkSpec parse_network_spec_string(const std::string& text);
NetworkSpec load_network_spec(const std::filesystem::path& path);

std::string serialize_network_spec(const NetworkSpec& spec);

}  // namespace kljn
