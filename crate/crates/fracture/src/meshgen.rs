//! Structured fixture meshes for the shipped benchmark scenarios and for
//! tests. The simulator itself only ingests meshes; these builders exist so
//! the benchmark inputs can be regenerated from scratch.

use crate::mesh::{BoundaryEdge, Mesh};

/// Axis-aligned rectangle `[x0, x0+w] x [y0, y0+h]`, `nx*ny` cells split
/// into two triangles each. Boundary tags: "bottom", "right", "top", "left".
pub fn rect(x0: f64, y0: f64, w: f64, h: f64, nx: usize, ny: usize) -> Mesh {
    assert!(nx >= 1 && ny >= 1);
    let node = |ix: usize, iy: usize| iy * (nx + 1) + ix;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for iy in 0..=ny {
        for ix in 0..=nx {
            nodes.push([
                x0 + w * ix as f64 / nx as f64,
                y0 + h * iy as f64 / ny as f64,
            ]);
        }
    }
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let a = node(ix, iy);
            let b = node(ix + 1, iy);
            let c = node(ix + 1, iy + 1);
            let d = node(ix, iy + 1);
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    let mut edges = Vec::new();
    for ix in 0..nx {
        edges.push(BoundaryEdge { nodes: [node(ix, 0), node(ix + 1, 0)], tag: "bottom".into() });
        edges.push(BoundaryEdge { nodes: [node(ix, ny), node(ix + 1, ny)], tag: "top".into() });
    }
    for iy in 0..ny {
        edges.push(BoundaryEdge { nodes: [node(nx, iy), node(nx, iy + 1)], tag: "right".into() });
        edges.push(BoundaryEdge { nodes: [node(0, iy), node(0, iy + 1)], tag: "left".into() });
    }
    Mesh::new(nodes, tris, edges).expect("structured rectangle is valid")
}

/// Unit square with `2n^2` elements.
pub fn unit_square(n: usize) -> Mesh {
    rect(0.0, 0.0, 1.0, 1.0, n, n)
}

/// Single-edge notch tension plate: unit square with a thin slit from the
/// left edge to the center at mid-height. The slit is a wedge of mouth
/// width `mouth_width` tapering linearly to the shared tip node at
/// (0.5, 0.5). Slit legs and the mouth segment are tagged "crack"; outer
/// boundary tags are "bottom", "right", "top", "left".
///
/// `n` must be even; the mesh has `2n^2` elements.
pub fn sent_plate(n: usize, mouth_width: f64) -> Mesh {
    assert!(n >= 4 && n % 2 == 0, "n must be even and >= 4");
    let mid = n / 2;
    let hw = |ix: usize| {
        // half-width of the slit at column ix (zero at and past the tip)
        let x = ix as f64 / n as f64;
        if ix < mid {
            0.5 * mouth_width * (1.0 - 2.0 * x)
        } else {
            0.0
        }
    };

    // base grid nodes; crack-line nodes left of the tip get an upper twin
    let mut nodes = Vec::new();
    let grid = |ix: usize, iy: usize| iy * (n + 1) + ix;
    for iy in 0..=n {
        for ix in 0..=n {
            let x = ix as f64 / n as f64;
            let y = iy as f64 / n as f64;
            let y = if iy == mid && ix < mid { y - hw(ix) } else { y };
            nodes.push([x, y]);
        }
    }
    let mut upper = vec![usize::MAX; mid];
    for ix in 0..mid {
        upper[ix] = nodes.len();
        nodes.push([ix as f64 / n as f64, 0.5 + hw(ix)]);
    }
    // node lookup: grid node, except upper twins for cells above the crack
    let node_at = |ix: usize, iy: usize, above: bool| {
        if iy == mid && ix < mid && above {
            upper[ix]
        } else {
            grid(ix, iy)
        }
    };

    let mut tris = Vec::with_capacity(2 * n * n);
    for iy in 0..n {
        for ix in 0..n {
            // corners of this cell; its bottom row of nodes lies "above" the
            // crack when the cell itself is above the crack line
            let bottom_above = iy >= mid;
            let top_above = iy + 1 >= mid;
            let a = node_at(ix, iy, bottom_above);
            let b = node_at(ix + 1, iy, bottom_above);
            let c = node_at(ix + 1, iy + 1, top_above);
            let d = node_at(ix, iy + 1, top_above);
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }

    let mut edges = Vec::new();
    for ix in 0..n {
        edges.push(BoundaryEdge { nodes: [grid(ix, 0), grid(ix + 1, 0)], tag: "bottom".into() });
        edges.push(BoundaryEdge { nodes: [grid(ix, n), grid(ix + 1, n)], tag: "top".into() });
    }
    for iy in 0..n {
        edges.push(BoundaryEdge { nodes: [grid(n, iy), grid(n, iy + 1)], tag: "right".into() });
    }
    // left edge, split by the slit mouth
    for iy in 0..n {
        let lo = node_at(0, iy, iy >= mid);
        let hi = node_at(0, iy + 1, iy + 1 >= mid);
        edges.push(BoundaryEdge { nodes: [lo, hi], tag: "left".into() });
    }
    // slit: lower leg, upper leg, and the mouth segment on the left edge
    for ix in 0..mid {
        let lo_a = grid(ix, mid);
        let lo_b = if ix + 1 < mid { grid(ix + 1, mid) } else { grid(mid, mid) };
        edges.push(BoundaryEdge { nodes: [lo_a, lo_b], tag: "crack".into() });
        let up_a = upper[ix];
        let up_b = if ix + 1 < mid { upper[ix + 1] } else { grid(mid, mid) };
        edges.push(BoundaryEdge { nodes: [up_a, up_b], tag: "crack".into() });
    }
    edges.push(BoundaryEdge { nodes: [grid(0, mid), upper[0]], tag: "crack".into() });

    Mesh::new(nodes, tris, edges).expect("SENT plate mesh is valid")
}

/// Double V-notch plate: rectangle `width x height` with 60°-opening
/// notches of depth `depth` and tip radius `tip_radius` cut into the top
/// and bottom edges at mid-width. Column-structured grid; the notch
/// boundaries are tagged "notch_top" and "notch_bottom".
pub fn vnotch_plate(
    width: f64,
    height: f64,
    depth: f64,
    tip_radius: f64,
    nx: usize,
    ny: usize,
) -> Mesh {
    assert!(nx >= 8 && ny >= 4);
    let half_angle = 30f64.to_radians();
    let cot = 1.0 / half_angle.tan();
    let s_tan = tip_radius * half_angle.cos();
    // notch depth profile as a function of distance s from the notch axis:
    // circular cap of radius `tip_radius` blended into straight 30° flanks
    let profile = |s: f64| -> f64 {
        let s = s.abs();
        let d = if s <= s_tan {
            depth - tip_radius + (tip_radius * tip_radius - s * s).sqrt()
        } else {
            let f_tan = depth - tip_radius + tip_radius * half_angle.sin();
            f_tan - cot * (s - s_tan)
        };
        d.max(0.0)
    };

    let xc = 0.5 * width;
    let col_x: Vec<f64> = (0..=nx).map(|i| width * i as f64 / nx as f64).collect();
    let y_top: Vec<f64> = col_x.iter().map(|&x| height - profile(x - xc)).collect();
    let y_bot: Vec<f64> = col_x.iter().map(|&x| profile(x - xc)).collect();

    let node = |i: usize, j: usize| i * (ny + 1) + j;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for i in 0..=nx {
        for j in 0..=ny {
            let t = j as f64 / ny as f64;
            nodes.push([col_x[i], y_bot[i] + t * (y_top[i] - y_bot[i])]);
        }
    }
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let a = node(i, j);
            let b = node(i + 1, j);
            let c = node(i + 1, j + 1);
            let d = node(i, j + 1);
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    let mut edges = Vec::new();
    let eps = 1e-12 * height;
    for i in 0..nx {
        let flat_top = (y_top[i] - height).abs() < eps && (y_top[i + 1] - height).abs() < eps;
        edges.push(BoundaryEdge {
            nodes: [node(i, ny), node(i + 1, ny)],
            tag: if flat_top { "top".into() } else { "notch_top".into() },
        });
        let flat_bot = y_bot[i].abs() < eps && y_bot[i + 1].abs() < eps;
        edges.push(BoundaryEdge {
            nodes: [node(i, 0), node(i + 1, 0)],
            tag: if flat_bot { "bottom".into() } else { "notch_bottom".into() },
        });
    }
    for j in 0..ny {
        edges.push(BoundaryEdge { nodes: [node(0, j), node(0, j + 1)], tag: "left".into() });
        edges.push(BoundaryEdge { nodes: [node(nx, j), node(nx, j + 1)], tag: "right".into() });
    }
    Mesh::new(nodes, tris, edges).expect("V-notch plate mesh is valid")
}
