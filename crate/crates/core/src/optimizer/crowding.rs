use crate::error::Result;
use crate::space::{Objective, SearchBox};

use super::neighbors::nearest_neighbors;
use super::ops::trial;
use super::{initialize, pick_donors, DeConfig, Evolution, Individual, RunObserver};

/// Deterministic-crowding DE.
///
/// Offspring are built with global DE/rand/1/bin donors and then compete with
/// the individual nearest to them in the generation-start population rather
/// than with their parent. Replacements are applied in offspring order, so a
/// slot claimed by several offspring keeps the fittest contender.
pub fn crowding_de_run<O, B>(
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
    bbox.validate()?;
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
        let mut next = pop.individuals.clone();
        let mut probe = positions.clone();
        for u in trials {
            let f = objective.evaluate(u);
            evaluations += 1;
            // nearest generation-start individual to u
            probe.push(u);
            let target = nearest_neighbors(&probe, size, 1)[0];
            probe.pop();
            if f >= next[target].fitness {
                next[target] = Individual {
                    position: u,
                    fitness: f,
                };
            }
        }
        pop.individuals = next;
        pop.generation = gen;
        observer.on_generation(&pop);
    }
    Ok(Evolution {
        population: pop,
        evaluations,
    })
}
