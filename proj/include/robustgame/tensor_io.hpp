#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "robustgame/tensor.hpp"

namespace robustgame {

// Tensor CSV: a header line "shape:h,w,c" followed by the flat row-major
// values, separated by commas, spaces or newlines. Values must lie in [0,1].
Tensor read_tensor_csv(std::istream& in);
void write_tensor_csv(std::ostream& out, const Tensor& t);

// 8-bit PGM (P2/P5) or PPM (P3/P6). Samples are divided by the file's
// maxval (255 for 8-bit images); shape is (h, w, 1) or (h, w, 3).
Tensor read_netpbm(std::istream& in);
// Writes binary P5/P6. Requires shape (h,w), (h,w,1) or (h,w,3).
void write_netpbm(std::ostream& out, const Tensor& t);
bool netpbm_compatible(const Tensor& t);

// Dispatches on content: "shape:" header means CSV, "P2/P3/P5/P6" netpbm.
Tensor load_input(const std::filesystem::path& path);

// Writes `<stem>.csv` and, when the shape allows, `<stem>.pgm` or `<stem>.ppm`.
// Returns the written paths, CSV first.
std::vector<std::filesystem::path> save_witness(const Tensor& t, const std::filesystem::path& stem);

}  // namespace robustgame
