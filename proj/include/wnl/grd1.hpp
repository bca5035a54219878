#pragma once

#include <string>

#include "wnl/field.hpp"

namespace wnl {

/// GRD1 binary grid container.
///
/// Layout (all integers and doubles little endian):
///   bytes 0..7   magic "GRDF0001"
///   u32          kind: 0 = real, 1 = complex
///   u32, u32     nx, ny
///   f64 x4       xmin, xmax, ymin, ymax
///   payload      nx*ny doubles, row-major with x as the slow index:
///                sample (ix, iy) at payload index ix*ny + iy.
///                Complex payloads interleave (re, im) per sample.
///
/// Round trips are bit exact.
void write_grd1(const std::string& path, const RealField& f);
void write_grd1(const std::string& path, const ComplexField& f);

RealField read_grd1_real(const std::string& path);
ComplexField read_grd1_complex(const std::string& path);

/// Peeks the kind field (0 real, 1 complex) without loading the payload.
unsigned read_grd1_kind(const std::string& path);

}  // namespace wnl
