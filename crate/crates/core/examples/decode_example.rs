//! Sum-product decoding in the odds and log domains, and the monomial form
//! of every message.
use deg2spa::decoder::{local_sum_run, spa_reference_run, spa_run, DecodeStatus, LogDecoder};
use deg2spa::graph::{generate, to_bipartite, Generator};
use deg2spa::report::decode_line;

fn main() -> deg2spa::Result<()> {
    let b = to_bipartite(&generate(&Generator::Example52)?);
    let u = [0.5, 0.5, 4.5];
    let out = spa_run(&b, &u, 1e-8, 200)?;
    println!("log domain:  {}", decode_line(&out));
    println!("odds domain: {}", decode_line(&spa_reference_run(&b, &u, 1e-8, 200)?));

    // x_e(t) = prod_l u_l^{a_e(t)_l}
    let log_u: Vec<f64> = u.iter().map(|v: &f64| v.ln()).collect();
    let traj = LogDecoder::new(&b).trajectory(&log_u, 6)?;
    let a = local_sum_run(&b, 6)?;
    println!("\nedge  exponents at t=6    log x_e(6)   from exponents");
    for e in 0..b.edge_count() {
        let row: Vec<String> = a.row(e).iter().map(|x| x.to_string()).collect();
        println!("{e:>4}  {:<20} {:>11.6}   {:>11.6}", row.join(" "), traj[5].x[e], a.log_message(e, &log_u));
    }

    let d = to_bipartite(&generate(&Generator::Dipole(3))?);
    let osc = spa_run(&d, &[2.0, 0.6], 1e-8, 200)?;
    assert_eq!(osc.status, DecodeStatus::MaxIterations);
    println!("\ndipole with u = (2, 0.6): {}", decode_line(&osc));
    Ok(())
}
