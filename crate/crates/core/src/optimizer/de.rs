use crate::error::Result;
use crate::space::{Objective, SearchBox};

use super::neighbors::neighborhoods;
use super::ops::trial;
use super::{initialize, pick_donors, DeConfig, Evolution, Individual, RunObserver};

enum DonorScope {
    Global,
    Neighborhood(usize),
}

/// Global DE/rand/1/bin, returning the whole final population.
pub fn de_evolve<O, B>(
    objective: &O,
    bbox: &SearchBox,
    config: &DeConfig,
    observer: &mut B,
) -> Result<Evolution>
where
    O: Objective + ?Sized,
    B: RunObserver + ?Sized,
{
    config.validate()?;
    evolve(objective, bbox, config, DonorScope::Global, observer)
}

/// Global DE/rand/1/bin, returning the best individual found.
pub fn de_run<O>(objective: &O, bbox: &SearchBox, config: &DeConfig) -> Result<Individual>
where
    O: Objective + ?Sized,
{
    let evo = de_evolve(objective, bbox, config, &mut ())?;
    Ok(*evo.population.best().expect("population is non-empty"))
}

/// DE with neighborhood mutation: donors for individual `i` come from its `m`
/// nearest neighbors (Euclidean, excluding `i`) in the current generation.
pub fn denm_run<O, B>(
    objective: &O,
    bbox: &SearchBox,
    config: &DeConfig,
    observer: &mut B,
) -> Result<Evolution>
where
    O: Objective + ?Sized,
    B: RunObserver + ?Sized,
{
    config.validate_neighborhood()?;
    evolve(
        objective,
        bbox,
        config,
        DonorScope::Neighborhood(config.neighborhood_size),
        observer,
    )
}

fn evolve<O, B>(
    objective: &O,
    bbox: &SearchBox,
    config: &DeConfig,
    scope: DonorScope,
    observer: &mut B,
) -> Result<Evolution>
where
    O: Objective + ?Sized,
    B: RunObserver + ?Sized,
{
    bbox.validate()?;
    let mut rng = config.rng();
    let size = config.population_size;
    let mut pop = initialize(objective, bbox, size, &mut rng);
    let mut evaluations = size;
    observer.on_generation(&pop);

    let everyone: Vec<usize> = (0..size).collect();
    for gen in 1..=config.max_iterations {
        let positions = pop.positions();
        let pools = match scope {
            DonorScope::Global => None,
            DonorScope::Neighborhood(m) => Some(neighborhoods(&positions, m)),
        };
        let mut trials = Vec::with_capacity(size);
        for i in 0..size {
            let pool = match &pools {
                Some(p) => {
                    observer.on_neighborhood(i, &p[i]);
                    &p[i][..]
                }
                None => &everyone[..],
            };
            let d = pick_donors(pool, i, &mut rng);
            observer.on_mutation(i, d);
            let donors = d.map(|k| positions[k]);
            trials.push(trial(
                positions[i],
                donors,
                config.scale_factor,
                config.crossover_rate,
                bbox,
                &mut rng,
            ));
        }
        for (slot, u) in pop.individuals.iter_mut().zip(trials) {
            let f = objective.evaluate(u);
            evaluations += 1;
            if f >= slot.fitness {
                *slot = Individual {
                    position: u,
                    fitness: f,
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
