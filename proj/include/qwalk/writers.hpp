#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "qwalk/dynamics.hpp"
#include "qwalk/spinor_field.hpp"

namespace qwalk::io {

/// Shortest form with 17 significant digits ("%.17g" semantics); "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double value);

/// observables.csv: t,norm,sx_expect,overlap_plus,overlap_minus,com,peak_site
class ObservableCsvWriter {
 public:
  explicit ObservableCsvWriter(std::ostream& out);
  void write(const ObservableRecord& rec);

 private:
  std::ostream& out_;
};

/// One JSON object per line: {"t":N,"density":[...],"m_z":[...]}; absent
/// arrays are omitted. Records without per-site data are skipped.
class SnapshotNdjsonWriter {
 public:
  explicit SnapshotNdjsonWriter(std::ostream& out) : out_(out) {}
  void write(const ObservableRecord& rec);

 private:
  std::ostream& out_;
};

/// Spinor dump with header x,u_re,u_im,v_re,v_im; one row per site.
void write_state_csv(std::ostream& out, const SpinorField& state);
void write_state_csv(const std::filesystem::path& path, const SpinorField& state);

/// Inverse of write_state_csv. Throws ValidationError on malformed input.
SpinorField read_state_csv(std::istream& in);
SpinorField read_state_csv(const std::filesystem::path& path);

}  // namespace qwalk::io
