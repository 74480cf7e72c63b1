#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ptycho/io.hpp"

namespace ptycho {

void write_positions_csv(const std::string& path, const std::vector<Position>& positions) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << "index,row,col\n";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    f << i << ',' << positions[i].row << ',' << positions[i].col << '\n';
  }
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

std::vector<Position> read_positions_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(f, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,row,col") throw IoError(path + ": expected header \"index,row,col\"");

  std::vector<Position> out;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    long long index = 0;
    long long row = 0;
    long long col = 0;
    char c1 = 0;
    char c2 = 0;
    if (!(ss >> index >> c1 >> row >> c2 >> col) || c1 != ',' || c2 != ',') {
      throw IoError(path + ": malformed line " + std::to_string(line_no));
    }
    out.push_back({static_cast<int>(row), static_cast<int>(col)});
  }
  return out;
}

}  // namespace ptycho
