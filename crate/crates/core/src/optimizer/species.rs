use crate::error::{DoaError, Result};
use crate::space::{Objective, Point, SearchBox};

use super::ops::trial;
use super::{initialize, pick_donors, DeConfig, Evolution, Individual, Population, RunObserver};

const MIN_SPECIES: usize = 4;

/// Greedy seed partitioning.
///
/// Individuals are visited by fitness (descending, lower index first on ties);
/// each joins the first existing seed within `radius`, or becomes a new seed.
/// Every returned species lists its seed first.
pub fn partition_species(pop: &Population, radius: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        pop.individuals[b]
            .fitness
            .total_cmp(&pop.individuals[a].fitness)
            .then(a.cmp(&b))
    });
    let mut species: Vec<Vec<usize>> = Vec::new();
    for i in order {
        let p = pop.individuals[i].position;
        match species
            .iter_mut()
            .find(|s| pop.individuals[s[0]].position.distance(&p) <= radius)
        {
            Some(s) => s.push(i),
            None => species.push(vec![i]),
        }
    }
    species
}

/// Species-based DE.
///
/// The population is re-partitioned every generation and each species evolves
/// with DE/rand/1/bin using only its own members as donors. Species with fewer
/// than four members get fresh random points added to their donor pool; those
/// points are never evaluated or inserted into the population.
pub fn species_de_run<O, B>(
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
            "species radius must be positive, got {radius}"
        )));
    }
    let mut rng = config.rng();
    let size = config.population_size;
    let mut pop = initialize(objective, bbox, size, &mut rng);
    let mut evaluations = size;
    observer.on_generation(&pop);

    for gen in 1..=config.max_iterations {
        let positions = pop.positions();
        let species = partition_species(&pop, radius);
        let mut extra: Vec<Point> = Vec::new();
        let mut trials = vec![Point::default(); size];
        for members in &species {
            let mut pool = members.clone();
            for _ in members.len()..MIN_SPECIES {
                pool.push(size + extra.len());
                extra.push(bbox.sample(&mut rng));
            }
            let locate = |k: usize| {
                if k < size {
                    positions[k]
                } else {
                    extra[k - size]
                }
            };
            for &i in members {
                let d = pick_donors(&pool, i, &mut rng);
                observer.on_mutation(i, d);
                trials[i] = trial(
                    positions[i],
                    d.map(locate),
                    config.scale_factor,
                    config.crossover_rate,
                    bbox,
                    &mut rng,
                );
            }
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
