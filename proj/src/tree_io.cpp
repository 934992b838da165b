#include "rpt/tree_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "rpt/error.hpp"

namespace rpt {

namespace {

constexpr char kMagic[4] = {'P', 'T', 'R', 'F'};
constexpr std::uint16_t kVersion = 1;

void put_bytes(std::string& out, const void* src, std::size_t len) {
    out.append(static_cast<const char*>(src), len);
}

void put_u8(std::string& out, std::uint8_t v) { put_bytes(out, &v, 1); }

template <typename T>
void put_le(std::string& out, T v) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i)
        put_u8(out, static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    put_le(out, std::bit_cast<std::uint64_t>(v));
}

struct Reader {
    std::string_view bytes;
    std::size_t pos = 0;

    void need(std::size_t len) const {
        if (pos + len > bytes.size())
            throw io_error("truncated tree data: need " + std::to_string(pos + len) +
                           " bytes, have " + std::to_string(bytes.size()));
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(bytes[pos++]);
    }
    template <typename T>
    T le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<T>(static_cast<std::uint8_t>(bytes[pos + i])) << (8 * i);
        pos += sizeof(T);
        return v;
    }
    double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
};

void write_node(std::string& out, const TreeNode& node) {
    if (node.is_leaf()) {
        put_u8(out, 1);
        put_le(out, static_cast<std::uint64_t>(node.indices.size()));
        for (std::uint64_t idx : node.indices) put_le(out, idx);
        return;
    }
    put_u8(out, 0);
    for (double x : node.rule.direction) put_f64(out, x);
    put_f64(out, node.rule.median);
    put_f64(out, node.rule.low);
    put_f64(out, node.rule.high);
    put_u8(out, node.rule.perturbed.has_value() ? 1 : 0);
    if (node.rule.perturbed) put_f64(out, *node.rule.perturbed);
    write_node(out, *node.left);
    write_node(out, *node.right);
}

std::unique_ptr<TreeNode> read_node(Reader& in, std::uint32_t d) {
    auto node = std::make_unique<TreeNode>();
    const std::uint8_t tag = in.u8();
    if (tag == 1) {
        const std::uint64_t count = in.le<std::uint64_t>();
        in.need(count * 8);
        node->indices.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) node->indices.push_back(in.le<std::uint64_t>());
        return node;
    }
    if (tag != 0) throw io_error("tree data: bad node tag " + std::to_string(tag));
    node->rule.direction.resize(d);
    for (std::uint32_t i = 0; i < d; ++i) node->rule.direction[i] = in.f64();
    node->rule.median = in.f64();
    node->rule.low = in.f64();
    node->rule.high = in.f64();
    if (in.u8() == 1) node->rule.perturbed = in.f64();
    node->left = read_node(in, d);
    node->right = read_node(in, d);
    return node;
}

}  // namespace

std::string serialize_tree(const PartitionTree& tree) {
    if (tree.root == nullptr) throw validation_error("serialize_tree: empty tree");
    std::string out;
    put_bytes(out, kMagic, 4);
    put_le(out, kVersion);
    put_u8(out, static_cast<std::uint8_t>(tree.kind));
    put_le(out, tree.n);
    put_le(out, tree.d);
    put_le(out, tree.leaf_capacity);
    put_f64(out, tree.alpha);
    put_le(out, tree.seed);
    write_node(out, *tree.root);
    return out;
}

PartitionTree deserialize_tree(std::string_view bytes) {
    Reader in{bytes};
    in.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw io_error("tree data: bad magic (expected PTRF)");
    in.pos = 4;
    const auto version = in.le<std::uint16_t>();
    if (version != kVersion)
        throw io_error("tree data: unsupported version " + std::to_string(version));
    PartitionTree tree;
    const std::uint8_t kind = in.u8();
    if (kind > 2) throw io_error("tree data: bad kind " + std::to_string(kind));
    tree.kind = static_cast<TreeKind>(kind);
    tree.n = in.le<std::uint64_t>();
    tree.d = in.le<std::uint32_t>();
    tree.leaf_capacity = in.le<std::uint32_t>();
    tree.alpha = in.f64();
    tree.seed = in.le<std::uint64_t>();
    tree.root = read_node(in, tree.d);
    if (in.pos != bytes.size())
        throw io_error("tree data: " + std::to_string(bytes.size() - in.pos) +
                       " trailing bytes");
    return tree;
}

void save_tree(const PartitionTree& tree, const std::string& path) {
    const std::string bytes = serialize_tree(tree);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + path);
}

PartitionTree load_tree(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_tree(bytes);
}

}  // namespace rpt
