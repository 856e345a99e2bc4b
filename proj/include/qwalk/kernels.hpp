#pragma once

// Sitewise arithmetic kernels of the walk.
//
// Every kernel exists as a portable scalar reference and, on x86-64 builds,
// as an AVX2/FMA variant. The variant is picked once at runtime from CPU
// features; QWALK_ISA=scalar|avx2 in the environment overrides the choice.
// Both variants are held to the same results up to floating-point
// reassociation (see tests/test_kernels.cpp).

#include <string_view>
#include <vector>

#include "qwalk/kernel_abi.hpp"

namespace qwalk::kernels {

bool cpu_has_avx2() noexcept;

/// Tables usable on this machine, scalar first.
std::vector<const KernelTable*> available() noexcept;

/// Table for the requested ISA; throws ValidationError if unavailable.
const KernelTable& table_for(Isa isa);

/// Process-wide table in use. Resolved on first call from QWALK_ISA or CPU
/// detection.
const KernelTable& active() noexcept;

/// Switch the process-wide table. Not synchronized with concurrent steps.
void set_active(Isa isa);

Isa parse_isa(std::string_view text);

}  // namespace qwalk::kernels
