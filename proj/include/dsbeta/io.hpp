#ifndef DSBETA_IO_HPP_
#define DSBETA_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsbeta/linalg.hpp"
#include "dsbeta/verify.hpp"

namespace dsbeta {

// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

// Matrix files: a "rows,cols" line, then one row-major line per matrix.
void write_matrix_csv(std::ostream &os, const std::vector<Matrix> &draws);
std::vector<Matrix> read_matrix_csv(std::istream &is);

// Eigenvalue files: a "v1,...,vk" header, then one descending row per draw.
void write_eigs_csv(std::ostream &os, const std::vector<Vector> &rows);
std::vector<Vector> read_eigs_csv(std::istream &is);

// {"rows": r, "cols": c, "draws": [[row-major entries], ...]}
nlohmann::ordered_json matrices_to_json(const std::vector<Matrix> &draws);
std::vector<Matrix> matrices_from_json(const nlohmann::json &j);
// {"k": k, "eigs": [[...], ...]}
nlohmann::ordered_json eigs_to_json(const std::vector<Vector> &rows);
std::vector<Vector> eigs_from_json(const nlohmann::json &j);

// Matrix or eigenvalue file in either format, detected from the content.
enum class TableKind { matrices, eigs };
struct Table {
  TableKind kind;
  std::vector<Matrix> matrices;
  std::vector<Vector> eigs;
};
Table read_table(std::istream &is);

// Reports share one schema; absent fields are omitted.
nlohmann::ordered_json to_json(const AuditReport &report);
nlohmann::ordered_json to_json(const McReport &report);
// CSV with one row per report and dims flattened to m,n,r,r_xi. Columns
// follow the JSON schema order; a field absent from a report is left empty.
void write_reports_csv(std::ostream &os, const std::vector<nlohmann::ordered_json> &reports);

}  // namespace dsbeta

#endif  // DSBETA_IO_HPP_
