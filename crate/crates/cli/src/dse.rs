use anyhow::{Context, Result};
use omr_core::dse::{explore, CostFixture, DesignSpace, DseReport, FpgaBudget, Workload};

use crate::args::DseArgs;
use crate::{exit, params};

pub fn run(args: &DseArgs) -> Result<u8> {
    // The cost model only reads the shape, so any ring dimension is fine here.
    let params = params::load(&args.params, true)?;
    let work = Workload::from_params(&params)?;
    let fixture = match &args.fixture {
        Some(path) => CostFixture::from_file(path).with_context(|| format!("loading fixture {}", path.display()))?,
        None => CostFixture::bundled(),
    };
    let mut budget = match &args.budget {
        Some(path) => FpgaBudget::from_file(path).with_context(|| format!("loading budget {}", path.display()))?,
        None => FpgaBudget::u55c(),
    };
    if let Some(dsp) = args.dsp {
        budget.dsp = dsp;
        budget.validate()?;
    }
    let space = DesignSpace {
        allow_wide_pc: args.wide_pc,
        ..DesignSpace::default()
    };
    let ranking = explore(&space, &work, &fixture, &budget)?;
    let mut report = DseReport::new(work, budget, space, ranking);
    if args.top > 0 {
        report.truncate(args.top);
    }

    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.json {
        println!("{json}");
    } else {
        print!("{}", report.to_table());
    }
    Ok(exit::SUCCESS)
}
