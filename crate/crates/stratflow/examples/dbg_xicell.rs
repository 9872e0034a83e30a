use stratflow::*;

fn cell_max(xi: &ScalarField, g: &Grid) -> f64 {
    let mut m = 0.0f64;
    for k in 0..g.nz { for i in 0..g.nx {
        let v = 0.25*(xi.at(i,k)+xi.at(i+1,k)+xi.at(i,k+1)+xi.at(i+1,k+1));
        m = m.max(v.abs());
    }}
    m
}

fn main() {
    let h: f64 = std::env::var("DBG_H").ok().and_then(|s| s.parse().ok()).unwrap_or(0.005);
    let sc = preset("homogeneous").unwrap().with_h(h)
        .with_snapshots(&(0..29).map(|n| n as f64 * 0.25).collect::<Vec<_>>());
    let out = run(&sc).unwrap();
    let g = sc.grid().unwrap();
    let node0 = out.snapshots[0].xi.max_abs();
    let cell0 = cell_max(&out.snapshots[0].xi, &g);
    let mut worst_node = 0.0f64; let mut worst_cell = 0.0f64;
    for snap in &out.snapshots {
        worst_node = worst_node.max(snap.xi.max_abs() / node0);
        worst_cell = worst_cell.max(cell_max(&snap.xi, &g) / cell0);
    }
    println!("h={h}: node ratio {:.4}  cell ratio {:.4}", worst_node, worst_cell);
}
