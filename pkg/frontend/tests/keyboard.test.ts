/**
 * Keyboard shortcuts: digits 1-9 map to genre ids 1-9 exactly; typing in
 * form fields never labels anything.
 */

import { describe, expect, it } from 'vitest';

import { attachKeyboard } from '../src/keyboard.js';

function press(target: EventTarget, key: string, origin?: EventTarget) {
  const event = new KeyboardEvent('keydown', { key, bubbles: true });
  if (origin) {
    Object.defineProperty(event, 'target', { value: origin });
  }
  target.dispatchEvent(event);
}

describe('keyboard shortcuts', () => {
  it('maps digits 1-9 to genre ids 1-9', () => {
    const labeled: number[] = [];
    const detach = attachKeyboard(document, {
      onGenre: (id) => labeled.push(id),
      onRound: () => undefined,
    });
    for (let digit = 1; digit <= 9; digit += 1) {
      press(document, String(digit));
    }
    press(document, '0');
    detach();
    expect(labeled).toEqual([1, 2, 3, 4, 5, 6, 7, 8, 9]);
  });

  it('r triggers the round', () => {
    let rounds = 0;
    const detach = attachKeyboard(document, {
      onGenre: () => undefined,
      onRound: () => {
        rounds += 1;
      },
    });
    press(document, 'r');
    press(document, 'R');
    detach();
    expect(rounds).toBe(2);
  });

  it('ignores keystrokes inside inputs', () => {
    const labeled: number[] = [];
    const detach = attachKeyboard(document, {
      onGenre: (id) => labeled.push(id),
      onRound: () => undefined,
    });
    const input = document.createElement('input');
    document.body.append(input);
    press(document, '5', input);
    detach();
    expect(labeled).toEqual([]);
  });

  it('detaching stops the listener', () => {
    const labeled: number[] = [];
    const detach = attachKeyboard(document, {
      onGenre: (id) => labeled.push(id),
      onRound: () => undefined,
    });
    detach();
    press(document, '3');
    expect(labeled).toEqual([]);
  });
});
