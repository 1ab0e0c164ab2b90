use nervekit::bicategory::{check_lp_characterization, lp_2nerve};
use nervekit::fixtures;
use std::time::Instant;

#[test]
#[ignore]
fn probe_lp_timing() {
    for (name, b) in fixtures::bicategory_fixtures() {
        let t = Instant::now();
        let x = lp_2nerve(&b, 4);
        let built = t.elapsed();
        let t = Instant::now();
        let report = check_lp_characterization(&x).unwrap();
        println!(
            "{name}: build {:?}, check {:?}, pass {}",
            built,
            t.elapsed(),
            report.all_pass()
        );
        assert!(report.all_pass(), "{name}");
    }
}
