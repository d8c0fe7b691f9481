#include "evotse/embedding_table.hpp"

#include <cstring>
#include <fstream>

#include "evotse/errors.hpp"

namespace evotse {

namespace {

constexpr char kMagic[8] = {'E', 'V', 'O', 'E', 'M', 'B', '1', '\n'};

template <typename T>
T read_le(std::istream& in, const std::string& what) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
        throw TruncatedFileError("truncated while reading " + what);
    }
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<T>(buf[i]) << (8 * i);
    }
    return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

} // namespace

EmbeddingTable load_embedding_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    char magic[8];
    if (!in.read(magic, 8)) {
        throw TruncatedFileError(path.string() + ": shorter than magic");
    }
    if (std::memcmp(magic, kMagic, 8) != 0) {
        throw BadMagicError(path.string() + ": bad magic");
    }
    EmbeddingTable table;
    table.dim = read_le<std::uint32_t>(in, "dim");
    const auto count = read_le<std::uint32_t>(in, "count");
    if (table.dim < 2 && count > 0) {
        throw DimMismatchError(path.string() + ": dim must be >= 2");
    }
    for (std::uint32_t r = 0; r < count; ++r) {
        const auto id_len = read_le<std::uint16_t>(in, "id length");
        std::string id(id_len, '\0');
        if (!in.read(id.data(), id_len)) {
            throw TruncatedFileError(path.string() + ": truncated id");
        }
        std::vector<double> vec(table.dim);
        for (std::uint32_t i = 0; i < table.dim; ++i) {
            const auto bits = read_le<std::uint32_t>(in, "vector data");
            float f;
            std::memcpy(&f, &bits, 4);
            vec[i] = static_cast<double>(f);
        }
        // Normalized at load; a zero vector in the file is a format error.
        vec = normalize(vec, Attribute::speaker).values();
        table.records[std::move(id)] = std::move(vec);
    }
    return table;
}

void save_embedding_table(const std::filesystem::path& path, std::uint32_t dim,
                          const std::map<std::string, std::vector<double>>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(kMagic, 8);
    write_le(out, dim);
    write_le(out, static_cast<std::uint32_t>(records.size()));
    for (const auto& [id, vec] : records) {
        if (vec.size() != dim) {
            throw DimMismatchError("record '" + id + "' has wrong dimension");
        }
        write_le(out, static_cast<std::uint16_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        for (double x : vec) {
            const auto f = static_cast<float>(x);
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            write_le(out, bits);
        }
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

EmbeddingVec FileBackedEmbedder::embed(const Segment& segment) const {
    auto it = table_.records.find(segment.id);
    if (it != table_.records.end()) {
        return normalize(it->second, attr_);
    }
    if (!segment.parts.empty()) {
        std::vector<double> acc(table_.dim, 0.0);
        for (const auto& [id, weight] : segment.parts) {
            auto pit = table_.records.find(id);
            if (pit == table_.records.end()) {
                throw IoError("embedding table has no record for part '" + id + "'");
            }
            for (std::size_t i = 0; i < acc.size(); ++i) {
                acc[i] += weight * pit->second[i];
            }
        }
        return normalize(acc, attr_);
    }
    throw IoError("embedding table has no record for '" + segment.id + "'");
}

} // namespace evotse
