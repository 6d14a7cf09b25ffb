#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "regarma/diagnostics.hpp"
#include "regarma/select.hpp"
#include "regarma/simulate.hpp"

namespace regarma {

/// Shortest round-trip decimal form; stable across runs for byte-identical output.
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

/**
 * Header row, one response column by name, every other numeric column
 * becomes a regressor. Columns with no numeric cells (dates, labels) are
 * skipped; a partially numeric column is an error naming the cell.
 */
TimeSeriesDataset read_dataset_csv(const std::filesystem::path& path, const std::string& response);

void write_dataset_csv(const TimeSeriesDataset& ds, const std::filesystem::path& path);

std::string truth_to_json(const SimulationTruth& truth, const SimulationConfig* config = nullptr);
SimulationTruth truth_from_json(const std::string& text);

void write_selection_table_csv(const SelectionResult& result, const std::filesystem::path& path);
void write_metrics_csv(const std::vector<MetricsReport>& rows, const std::filesystem::path& path);
void write_acf_csv(const Vector& acf, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace regarma
