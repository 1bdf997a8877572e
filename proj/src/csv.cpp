#include "refracto/csv.hpp"

#include <charconv>
#include <fstream>

#include "refracto/errors.hpp"

namespace refracto::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string f = line.substr(start, comma == std::string::npos ? comma : comma - start);
        // trim surrounding blanks
        const auto b = f.find_first_not_of(" \t\r");
        const auto e = f.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string{} : f.substr(b, e - b + 1));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

bool try_parse(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last && !text.empty();
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    const std::string p = path.string();

    CsvTable table;
    std::string line;
    int lineno = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;

        const auto fields = split_fields(line);
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!try_parse(fields[i], values[i])) {
                numeric = false;
                break;
            }
        }

        if (!numeric) {
            if (first_data_row) {
                table.header = fields;
                table.columns.assign(fields.size(), {});
                first_data_row = false;
                continue;
            }
            throw ParseError(p, lineno, "non-numeric data row '" + line + "'");
        }
        if (first_data_row) {
            table.columns.assign(fields.size(), {});
            first_data_row = false;
        }
        if (values.size() != table.columns.size())
            throw ParseError(p, lineno,
                             "row has " + std::to_string(values.size()) + " fields, expected " +
                                 std::to_string(table.columns.size()));
        for (std::size_t i = 0; i < values.size(); ++i)
            table.columns[i].push_back(values[i]);
    }
    if (table.columns.empty())
        throw ParseError(p, lineno, "no data rows");
    return table;
}

} // namespace refracto::io
