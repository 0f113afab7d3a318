//! Nelder–Mead downhill simplex.

/// Outcome of a single simplex run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of edge
/// `step`. Stops when the spread of simplex values is below `ftol` and every
/// vertex lies within `xtol` of the best one, or after `max_iters`.
pub fn nelder_mead<F>(
    f: F,
    x0: &[f64],
    step: f64,
    ftol: f64,
    xtol: f64,
    max_iters: usize,
) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = vertices[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&vertices[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= ftol && size <= xtol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| vertices[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&vertices[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(REFLECT);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(EXPAND);
            let fe = f(&expanded);
            if fe < fr {
                vertices[n] = expanded;
                values[n] = fe;
            } else {
                vertices[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            vertices[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let c = along(CONTRACT);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = along(-CONTRACT);
            let fc = f(&c);
            (c, fc)
        };
        if fc < values[n].min(fr) {
            vertices[n] = contracted;
            values[n] = fc;
            continue;
        }
        let best = vertices[0].clone();
        for i in 1..=n {
            vertices[i] = best
                .iter()
                .zip(&vertices[i])
                .map(|(b, v)| b + SHRINK * (v - b))
                .collect();
            values[i] = f(&vertices[i]);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    SimplexResult {
        x: vertices[best].clone(),
        fx: values[best],
        iterations,
        converged,
    }
}
