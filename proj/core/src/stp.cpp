#include "steiner/stp.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace steiner {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream stream(text);
    std::string raw;
    int number = 0;
    while (std::getline(stream, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

long long parse_int(const Line& line, const std::string& tok, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long long value = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw ParseError(line.number, "cannot parse " + what + " from '" + tok + "'");
    }
}

}  // namespace

SteinerInstance parse_stp(const std::string& text, const std::string& id) {
    const std::vector<Line> lines = tokenize(text);

    int declared_nodes = -1;
    int declared_edges = -1;
    int declared_terminals = -1;
    std::vector<Edge> edges;
    std::vector<NodeId> terminals;
    bool saw_graph = false;
    bool saw_terminals = false;
    std::string name = id;

    enum class Section { None, Graph, Terminals, Comment, Skip };
    Section section = Section::None;

    for (const Line& line : lines) {
        const std::string head = lower(line.tokens.front());
        if (head == "section") {
            if (line.tokens.size() < 2) throw ParseError(line.number, "SECTION without a name");
            const std::string which = lower(line.tokens[1]);
            if (which == "graph") {
                section = Section::Graph;
                saw_graph = true;
            } else if (which == "terminals") {
                section = Section::Terminals;
                saw_terminals = true;
            } else if (which == "comment") {
                section = Section::Comment;
            } else {
                section = Section::Skip;  // Coordinates and friends are ignored
            }
            continue;
        }
        if (head == "end") {
            section = Section::None;
            continue;
        }
        if (head == "eof") break;

        switch (section) {
            case Section::Graph: {
                if (head == "nodes") {
                    if (line.tokens.size() != 2) throw ParseError(line.number, "Nodes line needs one count");
                    declared_nodes = static_cast<int>(parse_int(line, line.tokens[1], "node count"));
                } else if (head == "edges" || head == "arcs") {
                    if (line.tokens.size() != 2) throw ParseError(line.number, "Edges line needs one count");
                    declared_edges = static_cast<int>(parse_int(line, line.tokens[1], "edge count"));
                } else if (head == "e" || head == "a") {
                    if (line.tokens.size() != 3 && line.tokens.size() != 4) {
                        throw ParseError(line.number, "edge line needs 'E u v [w]'");
                    }
                    const long long u = parse_int(line, line.tokens[1], "edge endpoint");
                    const long long v = parse_int(line, line.tokens[2], "edge endpoint");
                    long long w = 1;
                    if (line.tokens.size() == 4) w = parse_int(line, line.tokens[3], "edge weight");
                    if (u < 1 || v < 1) throw ParseError(line.number, "node ids are 1-based");
                    if (w <= 0) throw ParseError(line.number, "edge weight must be positive");
                    edges.push_back(make_edge(static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1), w));
                } else {
                    throw ParseError(line.number, "unexpected token '" + line.tokens.front() + "' in Graph section");
                }
                break;
            }
            case Section::Terminals: {
                if (head == "terminals") {
                    if (line.tokens.size() != 2) throw ParseError(line.number, "Terminals line needs one count");
                    declared_terminals = static_cast<int>(parse_int(line, line.tokens[1], "terminal count"));
                } else if (head == "t") {
                    if (line.tokens.size() != 2) throw ParseError(line.number, "terminal line needs 'T v'");
                    const long long t = parse_int(line, line.tokens[1], "terminal id");
                    if (t < 1) throw ParseError(line.number, "node ids are 1-based");
                    terminals.push_back(static_cast<NodeId>(t - 1));
                } else {
                    throw ParseError(line.number, "unexpected token '" + line.tokens.front() + "' in Terminals section");
                }
                break;
            }
            case Section::Comment: {
                if (head == "name" && line.tokens.size() >= 2 && name.empty()) {
                    name = line.tokens[1];
                    std::erase(name, '"');
                }
                break;
            }
            case Section::None:
            case Section::Skip:
                break;  // magic line, blank noise, ignored sections
        }
    }

    const int last_line = lines.empty() ? 0 : lines.back().number;
    if (!saw_graph) throw ParseError(last_line, "missing SECTION Graph");
    if (!saw_terminals) throw ParseError(last_line, "missing SECTION Terminals");
    if (declared_nodes < 1) throw ParseError(last_line, "missing or invalid Nodes count");
    if (declared_edges >= 0 && declared_edges != static_cast<int>(edges.size())) {
        throw ParseError(last_line, "declared edge count " + std::to_string(declared_edges) +
                                        " but found " + std::to_string(edges.size()) + " E lines");
    }
    if (declared_terminals >= 0 && declared_terminals != static_cast<int>(terminals.size())) {
        throw ParseError(last_line, "declared terminal count " + std::to_string(declared_terminals) +
                                        " but found " + std::to_string(terminals.size()) + " T lines");
    }
    for (const Edge& e : edges) {
        if (e.v >= declared_nodes) throw ParseError(last_line, "edge endpoint exceeds declared node count");
    }
    for (NodeId t : terminals) {
        if (t >= declared_nodes) throw ParseError(last_line, "terminal exceeds declared node count");
    }

    try {
        return SteinerInstance::create(declared_nodes, std::move(edges), std::move(terminals), std::nullopt, name);
    } catch (const InvalidInstance& err) {
        throw ParseError(last_line, err.what());
    }
}

std::string serialize_stp(const SteinerInstance& instance) {
    std::ostringstream out;
    out << "33D32945 STP File, STP Format Version 1.0\n\n";
    out << "SECTION Comment\n";
    out << "Name \"" << instance.id() << "\"\n";
    out << "END\n\n";
    out << "SECTION Graph\n";
    out << "Nodes " << instance.node_count() << "\n";
    out << "Edges " << instance.edges().size() << "\n";
    for (const Edge& e : instance.edges()) {
        out << "E " << (e.u + 1) << " " << (e.v + 1) << " " << e.w << "\n";
    }
    out << "END\n\n";
    out << "SECTION Terminals\n";
    out << "Terminals " << instance.terminals().size() << "\n";
    for (NodeId t : instance.terminals()) {
        out << "T " << (t + 1) << "\n";
    }
    out << "END\n\nEOF\n";
    return out.str();
}

}  // namespace steiner
