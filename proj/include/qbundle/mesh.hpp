#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qb {

// Simplicial mesh with a vertex-level involution. Cells are stored positively
// oriented with respect to the manifold orientation. Coordinates are
// chart-dependent: torus angles in [0,2pi)^d, embedded unit vectors for the
// spheres, (x,y) for the disk, base coords plus t for cylinders.
struct InvolutiveMesh {
    int dim{0};
    int coord_dim{0};
    int N{0};                       // build resolution parameter
    std::string manifold_tag;       // T2, T3, S2, DISK, CYLINDER, S3_PLUS, S3
    std::vector<double> coords;     // vertex coords, stride coord_dim
    std::vector<int> cells;         // stride dim+1
    std::vector<int> tau;           // vertex involution
    int orientation_sign_of_tau{1};
    std::vector<int> fixed_vertices;  // ascending
    bool tau_simplicial{true};        // cylinder splits are not tau-equivariant

    // boundary bookkeeping: for S3_PLUS, boundary_maps[0] indexes the layer-0
    // copy of the S2 mesh; for CYLINDER, [0] is the t=0 base copy and [1] the
    // t=1 copy (vertex i of the base mesh -> boundary_maps[b][i]).
    std::vector<std::vector<int>> boundary_maps;

    int n_vertices() const { return coord_dim ? static_cast<int>(coords.size()) / coord_dim : 0; }
    int verts_per_cell() const { return dim + 1; }
    int n_cells() const { return dim ? static_cast<int>(cells.size()) / (dim + 1) : 0; }
    const int* cell(int c) const { return &cells[static_cast<size_t>(c) * (dim + 1)]; }
    const double* vertex(int v) const { return &coords[static_cast<size_t>(v) * coord_dim]; }

    // canonical undirected edge list (u < v), derived from cells, sorted
    std::vector<std::pair<int, int>> edge_list() const;

    // Euclidean signed volume of a cell in the local chart (torus deltas
    // unwrapped); used by the volume/orientation checks.
    double cell_volume(int c) const;

    uint64_t content_hash() const;  // FNV-1a over the serialized structure
};

InvolutiveMesh build_torus(int d, int N);
InvolutiveMesh build_sphere2(int N);
InvolutiveMesh build_sphere3_plus(int N);
InvolutiveMesh build_sphere3_double(int N);  // closed double of S3_PLUS (calibration use)
InvolutiveMesh build_disk(int N);
InvolutiveMesh build_cylinder(const InvolutiveMesh& base, int M);

std::vector<std::pair<int, std::vector<double>>> fixed_points(const InvolutiveMesh& mesh);

// torus index helpers (vertex = i + N*(j + N*l))
int torus_vertex_index(const InvolutiveMesh& mesh, int i, int j, int l = 0);

std::string mesh_to_json(const InvolutiveMesh& mesh);
InvolutiveMesh mesh_from_json(const std::string& text);

}  // namespace qb
