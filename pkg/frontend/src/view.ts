/**
 * DOM rendering for the annotation screen.
 *
 * Layout: progress strip, the queued recipe (directions step by step with
 * extended entities highlighted inline, plus the full entity chip panel),
 * committee votes with their disagreement, genre buttons 1-9, round
 * trigger.
 */

import { entityChips, highlightEntities } from './highlight.js';
import type { SessionView } from './state.js';
import { GENRES } from './types.js';

function el(tag: string, className: string, html?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (html !== undefined) node.innerHTML = html;
  return node;
}

function renderProgress(view: SessionView): HTMLElement {
  const strip = el('div', 'progress');
  const metrics = view.metrics;
  const cells: [string, string][] = metrics
    ? [
        ['round', String(metrics.rounds)],
        ['human labels', String(metrics.human)],
        ['machine labels', String(metrics.machine)],
        ['pool remaining', String(metrics.pool_remaining)],
        ['committee agreement', metrics.committee_agreement.toFixed(3)],
      ]
    : [['round', '-']];
  for (const [label, value] of cells) {
    const cell = el('div', 'progress-cell');
    cell.append(el('span', 'progress-value', value));
    cell.append(el('span', 'progress-label', label));
    strip.append(cell);
  }
  if (view.lastRoundAutoLabeled !== null) {
    const cell = el('div', 'progress-cell');
    cell.append(
      el('span', 'progress-value', String(view.lastRoundAutoLabeled)),
    );
    cell.append(el('span', 'progress-label', 'auto-labeled last round'));
    strip.append(cell);
  }
  return strip;
}

function renderQuery(view: SessionView): HTMLElement {
  const panel = el('section', 'query');
  const query = view.query;
  if (query === null) {
    const notice = view.poolEmpty
      ? 'Pool empty: every record is labeled. Final counts above.'
      : 'Batch exhausted. Run the next round (R) to retrain and requeue.';
    panel.append(el('p', 'notice', notice));
    return panel;
  }
  panel.append(el('h2', 'title', escape(query.title)));
  panel.append(
    el(
      'p',
      'query-meta',
      `record #${query.record_id} &middot; ${view.remainingInBatch} left ` +
        'in this batch',
    ),
  );
  const steps = el('ol', 'directions');
  for (const step of query.directions) {
    steps.append(
      el('li', 'step', highlightEntities(step, query.extended_ner, query.ner)),
    );
  }
  panel.append(steps);
  panel.append(el('h3', 'panel-heading', 'Extended entities'));
  panel.append(
    el('p', 'entities', entityChips(query.extended_ner, query.ner)),
  );
  panel.append(el('h3', 'panel-heading', 'Committee votes'));
  const votes = el('ul', 'votes');
  for (const vote of query.committee_votes) {
    votes.append(
      el('li', 'vote', `${escape(vote.member)} &rarr; ${escape(vote.genre)}`),
    );
  }
  panel.append(votes);
  panel.append(
    el(
      'p',
      'entropy',
      `vote entropy ${query.vote_entropy.toFixed(4)} nats`,
    ),
  );
  return panel;
}

function renderControls(
  view: SessionView,
  onGenre: (id: number) => void,
  onRound: () => void,
): HTMLElement {
  const controls = el('section', 'controls');
  const buttons = el('div', 'genre-buttons');
  for (const genre of GENRES) {
    const button = document.createElement('button');
    button.className = 'genre';
    button.dataset.genreId = String(genre.id);
    button.innerHTML = `<kbd>${genre.id}</kbd> ${genre.name}`;
    button.disabled = view.busy || view.query === null;
    button.addEventListener('click', () => onGenre(genre.id));
    buttons.append(button);
  }
  controls.append(buttons);
  const round = document.createElement('button');
  round.className = 'round-trigger';
  round.innerHTML = '<kbd>R</kbd> Run round (retrain + auto-label)';
  round.disabled = view.busy || view.sessionId === null || view.poolEmpty;
  round.addEventListener('click', onRound);
  controls.append(round);
  return controls;
}

function escape(text: string): string {
  const probe = document.createElement('span');
  probe.textContent = text;
  return probe.innerHTML;
}

export function renderSession(
  container: HTMLElement,
  view: SessionView,
  onGenre: (id: number) => void,
  onRound: () => void,
): void {
  container.replaceChildren();
  if (view.error !== null) {
    const banner = el('div', 'banner error', escape(view.error));
    container.append(banner);
  }
  container.append(renderProgress(view));
  container.append(renderQuery(view));
  container.append(renderControls(view, onGenre, onRound));
}
