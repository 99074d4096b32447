/**
 * Entry point: create a session against the serving corpus and hand the
 * screen to the controller/renderer pair.
 *
 * Query-string knobs: ?corpus=default&feature=title-ner&tau=0.99&batch=9
 */

import { ApiClient } from './api.js';
import { attachKeyboard } from './keyboard.js';
import { SessionController } from './state.js';
import { renderSession } from './view.js';

function boot(): void {
  const root = document.getElementById('app');
  if (!(root instanceof HTMLElement)) {
    throw new Error('missing #app container');
  }
  const params = new URLSearchParams(window.location.search);
  const options = {
    corpus: params.get('corpus') ?? 'default',
    feature: params.get('feature') ?? 'title-ner',
    tau: Number(params.get('tau') ?? '0.99'),
    batch: Number(params.get('batch') ?? '9'),
    seed: Number(params.get('seed') ?? '0'),
  };

  const controller: SessionController = new SessionController(
    new ApiClient(''),
    (view) =>
      renderSession(
        root,
        view,
        (genreId) => void controller.submitLabel(genreId),
        () => void controller.triggerRound(),
      ),
  );
  attachKeyboard(document, {
    onGenre: (genreId) => void controller.submitLabel(genreId),
    onRound: () => void controller.triggerRound(),
  });
  void controller.start(options);
}

boot();
