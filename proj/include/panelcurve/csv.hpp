#pragma once

#include <iosfwd>
#include <string>

#include "panelcurve/dataset.hpp"

namespace panelcurve {

// Schema: entity,period,cpi,expected_cpi,unemployment,gdp_growth
// Period as YYYYQn, empty field = hole, decimal point. The period axis of the
// resulting dataset is the gap-free quarter range spanning every row seen.
PanelDataset ingest_csv(std::istream& in);
PanelDataset ingest_csv_file(const std::string& path);

// Values are written shortest-round-trip, so write -> ingest reproduces the
// dataset bit for bit.
void write_csv(const PanelDataset& data, std::ostream& out);
void write_csv_file(const PanelDataset& data, const std::string& path);
std::string to_csv(const PanelDataset& data);

} // namespace panelcurve
