use crate::error::{DoaError, Result};
use crate::space::{Objective, Point, SearchBox};

use super::ops::trial;
use super::{initialize, pick_donors, DeConfig, Evolution, Individual, RunObserver};

/// `f_i / Σ_j max(0, 1 − d_ij / σ)`, the sum running over all points
/// including `i` itself.
///
/// Negative fitness is multiplied by the niche count instead, so crowding
/// always lowers shared fitness.
pub fn shared_fitness(fitness: &[f64], positions: &[Point], radius: f64) -> Vec<f64> {
    positions
        .iter()
        .zip(fitness)
        .map(|(p, &f)| {
            let niche: f64 = positions
                .iter()
                .map(|q| (1.0 - p.distance(q) / radius).max(0.0))
                .sum();
            if f >= 0.0 {
                f / niche
            } else {
                f * niche
            }
        })
        .collect()
}

/// Fitness-sharing DE.
///
/// Each parent competes with its own offspring on shared fitness, where niche
/// counts are taken over the union of parents and offspring. Individuals keep
/// their raw fitness.
pub fn sharing_de_run<O, B>(
    objective: &O,
    bbox: &SearchBox,
    config: &DeConfig,
    radius: f64,
    observer: &mut B,
) -> Result<Evolution>
where
    O: Objective + ?Sized,
    B: RunObserver + ?Sized,
{
    config.validate()?;
    bbox.validate()?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(DoaError::Config(format!(
            "sharing radius must be positive, got {radius}"
        )));
    }
    let mut rng = config.rng();
    let size = config.population_size;
    let mut pop = initialize(objective, bbox, size, &mut rng);
    let mut evaluations = size;
    observer.on_generation(&pop);

    let everyone: Vec<usize> = (0..size).collect();
    for gen in 1..=config.max_iterations {
        let positions = pop.positions();
        let mut trials = Vec::with_capacity(size);
        for i in 0..size {
            let d = pick_donors(&everyone, i, &mut rng);
            observer.on_mutation(i, d);
            trials.push(trial(
                positions[i],
                d.map(|k| positions[k]),
                config.scale_factor,
                config.crossover_rate,
                bbox,
                &mut rng,
            ));
        }
        let trial_fitness: Vec<f64> = trials
            .iter()
            .map(|&u| {
                evaluations += 1;
                objective.evaluate(u)
            })
            .collect();

        let mut all_pos = positions;
        all_pos.extend_from_slice(&trials);
        let mut all_fit = pop.fitness();
        all_fit.extend_from_slice(&trial_fitness);
        let shared = shared_fitness(&all_fit, &all_pos, radius);

        for i in 0..size {
            if shared[size + i] >= shared[i] {
                pop.individuals[i] = Individual {
                    position: trials[i],
                    fitness: trial_fitness[i],
                };
            }
        }
        pop.generation = gen;
        observer.on_generation(&pop);
    }
    Ok(Evolution {
        population: pop,
        evaluations,
    })
}
