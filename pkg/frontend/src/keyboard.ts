/**
 * Keyboard shortcuts: digits 1-9 label the genre with that id, "r" runs
 * the next round.  Keystrokes inside text inputs are ignored.
 */

export interface KeyboardHandlers {
  onGenre: (genreId: number) => void;
  onRound: () => void;
}

export function attachKeyboard(
  target: EventTarget,
  handlers: KeyboardHandlers,
): () => void {
  const listener = (event: Event) => {
    const key = (event as KeyboardEvent).key;
    const origin = event.target;
    if (
      origin instanceof HTMLInputElement ||
      origin instanceof HTMLTextAreaElement ||
      origin instanceof HTMLSelectElement
    ) {
      return;
    }
    if (key >= '1' && key <= '9') {
      event.preventDefault();
      handlers.onGenre(Number(key));
    } else if (key === 'r' || key === 'R') {
      event.preventDefault();
      handlers.onRound();
    }
  };
  target.addEventListener('keydown', listener);
  return () => target.removeEventListener('keydown', listener);
}
