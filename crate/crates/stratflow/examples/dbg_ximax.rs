use stratflow::*;

fn main() {
    let sc = preset("homogeneous").unwrap().with_h(0.005)
        .with_snapshots(&[2.0, 4.5, 5.5, 6.5]);
    let out = run(&sc).unwrap();
    let g = sc.grid().unwrap();
    for snap in &out.snapshots {
        let (mut best, mut bi, mut bk) = (0.0f64, 0, 0);
        for k in 0..=g.nz { for i in 0..=g.nx {
            if snap.xi.at(i, k).abs() > best { best = snap.xi.at(i, k).abs(); bi = i; bk = k; }
        }}
        println!("t {:.2}  max|xi| {:.3} at node ({}, {})  x={:.3} z={:.3}", snap.t, best, bi, bk, bi as f64*g.h, bk as f64*g.h);
    }
}
