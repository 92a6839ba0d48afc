// pattern: P5 inline-func-varOutside
// expected: no-deadlock
package main

import "fmt"

func main() {
	msg := 42
	ch := make(chan int)
	go func() {
		if msg > 10 {
			ch <- msg
		}
	}()
	fmt.Println(<-ch)
}
