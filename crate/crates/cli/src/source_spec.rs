//! Textual source and leak selectors.

use nmext_core::source::Source;

use crate::CliError;

/// `uniform`, `constant:X`, `prefix:S`, `half`, `subset:a,b,..` or `pmf:PATH`
/// (lines `x,e,prob`), optionally followed by a leak applied to the
/// resulting source.
pub fn parse_source(spec: &str, x_count: u64, leak: &str) -> Result<Source, CliError> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad number {s:?} in source {spec:?}")));
    let src = match kind {
        "uniform" => Source::uniform(x_count)?,
        "constant" => Source::constant(x_count, num(arg)?)?,
        "prefix" => Source::prefix(x_count, num(arg)?)?,
        "half" => Source::prefix(x_count, x_count.div_ceil(2))?,
        "subset" => {
            let support = arg.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            Source::subset(x_count, &support)?
        }
        "pmf" => {
            let text = std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
            Source::parse_pmf(&text, x_count)?
        }
        other => return Err(CliError::Usage(format!("unknown source kind {other:?}"))),
    };
    apply_leak(src, leak)
}

/// `none`, `copy` (`e = x`) or `mod:K` (`e = x mod K`).
fn apply_leak(src: Source, leak: &str) -> Result<Source, CliError> {
    let (kind, arg) = leak.split_once(':').unwrap_or((leak, ""));
    match kind {
        "none" => Ok(src),
        _ if src.e_count() != 1 => Err(CliError::Usage("a leak needs a source without side information".into())),
        "copy" => Ok(src.with_leak(src.x_count(), |x| x)?),
        "mod" => {
            let k: u64 = arg.parse().ok().filter(|&k| k > 0).ok_or_else(|| CliError::Usage(format!("bad leak {leak:?}")))?;
            Ok(src.with_leak(k, |x| x % k)?)
        }
        other => Err(CliError::Usage(format!("unknown leak {other:?}"))),
    }
}
