#include "sbreak/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sbreak::csv {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& col) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        std::ostringstream os;
        os << "line " << line_no << ": column '" << col << "' has non-numeric or missing value '"
           << s << "'";
        throw CsvError(os.str());
    }
    return v;
}

} // namespace

void write_dataset(const std::string& path, const dgp::Dataset& data) {
    data.validate();
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open " + path + " for writing");
    out << (data.has_x() ? "t,y,x\n" : "t,y\n");
    for (std::size_t i = 0; i < data.rows(); ++i) {
        out << (i + 1) << ',' << format_double(data.y[i]);
        if (data.has_x()) out << ',' << format_double(data.x[i]);
        out << '\n';
    }
}

dgp::Dataset read_dataset(const std::string& path, const std::string& y_col,
                          const std::optional<std::string>& x_col) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw CsvError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);

    auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };

    const auto y_idx = find_col(y_col);
    if (!y_idx) throw CsvError(path + ": missing column '" + y_col + "'");
    std::optional<std::size_t> x_idx;
    if (x_col) x_idx = find_col(*x_col);

    dgp::Dataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size()) {
            std::ostringstream os;
            os << path << ": line " << line_no << " has " << fields.size() << " fields, expected "
               << header.size();
            throw CsvError(os.str());
        }
        data.y.push_back(parse_double(fields[*y_idx], line_no, y_col));
        if (x_idx) data.x.push_back(parse_double(fields[*x_idx], line_no, *x_col));
    }
    if (data.y.empty()) throw CsvError(path + ": no data rows");
    data.meta = "source=" + path;
    return data;
}

void write_rss_profile(const std::string& path, const std::vector<bp::RssPoint>& profile) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open " + path + " for writing");
    out << "k,tau,rss\n";
    for (const auto& p : profile)
        out << p.k << ',' << format_double(p.tau) << ',' << format_double(p.rss) << '\n';
}

void write_wald_profile(const std::string& path, const wald::WaldScan& scan) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open " + path + " for writing");
    out << "k,tau,wald\n";
    for (std::size_t i = 0; i < scan.stats.size(); ++i)
        out << scan.ks[i] << ',' << format_double(scan.grid[i]) << ','
            << format_double(scan.stats[i]) << '\n';
}

} // namespace sbreak::csv
